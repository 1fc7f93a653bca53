//! Constructive non-commutation for conjugate elements with disjoint
//! supports in an o-2 transitive PL group: from h and g with
//! supp(h) ∩ supp(h^g) = ∅ it builds interpolated elements f and k and the
//! words w1 = [h⁻¹,h^f], w2 = [h^{-g},h^{gk}], together with an evaluation
//! point separating w1·w2 from w2·w1.

use crate::cert::{word, Elem, Pt, Relation, WitnessCert};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::plmap::{interpolate, PLMap};
use crate::rat::Rat;

/// Everything the construction produced. `h` and `g` are the normalized
/// pair actually used in the words: the original pair may have been swapped
/// with its conjugate or inverted so that the chosen supporting interval of
/// h precedes its g-image and h moves it upward; the flags record this.
#[derive(Clone, Debug)]
pub struct Lemma31 {
    pub h: PLMap,
    pub g: PLMap,
    pub swapped: bool,
    pub inverted: bool,
    pub f: PLMap,
    pub k: PLMap,
    pub w1: PLMap,
    pub w2: PLMap,
    pub gamma: Rat,
    pub delta: Rat,
    pub lambda: Rat,
    pub mu: Rat,
    /// γ pulled back one step by h^g; the second image in the claim.
    pub gamma_pre: Rat,
    /// The six interpolation pairs defining k (sequence (2) ↦ sequence (1)).
    pub k_pairs: Vec<(Rat, Rat)>,
    /// The eight interpolation pairs defining f.
    pub f_pairs: Vec<(Rat, Rat)>,
    pub cert: WitnessCert,
}

fn interval_precedes(a: &Interval, b: &Interval) -> bool {
    a.hi() <= b.lo()
}

pub fn lemma31(h: &PLMap, g: &PLMap) -> Result<Lemma31> {
    if h.is_identity() {
        return Err(Error::NoSupportingInterval);
    }
    let hg = h.conjugate_by(g);
    let supp_h = h.support();
    let supp_hg = hg.support();
    if !supp_h.is_disjoint_from(&supp_hg) {
        return Err(Error::SupportsNotDisjoint);
    }

    // pick a supporting interval of h whose g-image lies above it, swapping
    // h with h^g if the image lies below
    let part = supp_h.parts()[0].clone();
    let image = g.image_of_set(&crate::interval::IntervalSet::single(part.clone()));
    let part_img = image.parts()[0].clone();
    let (mut hh, gg, delta1, swapped) = if interval_precedes(&part, &part_img) {
        (h.clone(), g.clone(), part, false)
    } else {
        (hg.clone(), g.inverse(), part_img, true)
    };

    // normalize the direction: h moves Δ1 upward
    let theta = delta1.interior_point();
    let inverted = hh.eval(&theta) < theta;
    if inverted {
        hh = hh.inverse();
    }
    let k2 = hh.conjugate_by(&gg);

    // γ, δ, λ, μ in Δ2 with γ < γk2 < μk2⁻¹ < δ < λ < μ < δk2 < λk2
    let gamma = gg.eval(&theta);
    let a1 = k2.eval(&gamma);
    let a2 = k2.eval(&a1);
    let mu = k2.eval(&a2);
    let delta = Rat::midpoint(&a2, &mu);
    let lambda = Rat::midpoint(&delta, &mu);
    debug_assert!(gamma < a1 && a1 < a2 && a2 < delta && delta < lambda && lambda < mu);

    // k sends the increasing sequence (2) to the increasing sequence (1)
    let theta_h = hh.eval(&theta);
    let xi0 = Rat::midpoint(&theta, &theta_h);
    let lam_k2 = k2.eval(&lambda);
    let seq2 = [theta.clone(), xi0, gamma.clone(), a1.clone(), a2.clone(), mu.clone()];
    let seq1 = [gamma.clone(), a1.clone(), a2.clone(), delta.clone(), mu.clone(), lam_k2];
    let k_pairs: Vec<(Rat, Rat)> = seq2.iter().cloned().zip(seq1.iter().cloned()).collect();
    let k = interpolate(&k_pairs)?;

    // f sends ζ4 < ζ3 < ζ2 < ζ1 < ζ4h < ζ3h < ζ2h < ζ1h to
    // βh⁻³ < αh⁻³ < βh⁻² < αh⁻² < γ(h^g)⁻¹ < γ < δ < λ
    let hinv = hh.inverse();
    let alpha = theta.clone();
    let beta = Rat::midpoint(&hinv.eval(&alpha), &alpha);
    let q = &theta_h - &theta;
    let z3 = &theta + &(&q / &Rat::int(4));
    let z2 = &theta + &(&q / &Rat::int(2));
    let z1 = &theta + &(&q * &Rat::new(3, 4));
    let sources = [
        theta.clone(),
        z3.clone(),
        z2.clone(),
        z1.clone(),
        theta_h.clone(),
        hh.eval(&z3),
        hh.eval(&z2),
        hh.eval(&z1),
    ];
    let am1 = hinv.eval(&alpha);
    let am2 = hinv.eval(&am1);
    let am3 = hinv.eval(&am2);
    let bm1 = hinv.eval(&beta);
    let bm2 = hinv.eval(&bm1);
    let bm3 = hinv.eval(&bm2);
    let gamma_pre = k2.eval_inverse(&gamma);
    let targets = [
        bm3,
        am3,
        bm2,
        am2,
        gamma_pre.clone(),
        gamma.clone(),
        delta.clone(),
        lambda.clone(),
    ];
    let f_pairs: Vec<(Rat, Rat)> = sources.iter().cloned().zip(targets.iter().cloned()).collect();
    let f = interpolate(&f_pairs)?;

    let w1 = PLMap::commutator(&hh.inverse(), &hh.conjugate_by(&f));
    let w2 = PLMap::commutator(&k2.inverse(), &k2.conjugate_by(&k));

    // the intermediate identities of the construction, all exact
    assert_eq!(w1.eval(&lambda), gamma, "λw1 = γ");
    assert_eq!(w2.eval(&lambda), delta, "λw2 = δ");
    assert_eq!(w2.eval(&gamma), gamma, "γw2 = γ");
    assert_eq!(w1.eval(&delta), gamma_pre, "δw1 = γ(h^g)⁻¹");
    let lhs = w2.eval(&w1.eval(&lambda));
    let rhs = w1.eval(&w2.eval(&lambda));
    assert_eq!(lhs, gamma);
    assert_eq!(rhs, gamma_pre);
    assert_ne!(lhs, rhs);

    let mut recipe = vec![
        "non-commutation of w1 = [h^-1,h^f] and w2 = [h^-g,h^(gk)]".to_string(),
        format!("normalization: swapped={} inverted={}", swapped, inverted),
        format!("gamma={} delta={} lambda={} mu={}", gamma, delta, lambda, mu),
    ];
    recipe.push(format!("chain checks: lambda*w1={} lambda*w2={} gamma*w2={}", gamma, delta, gamma));
    let cert = WitnessCert::build(
        recipe,
        vec![
            ("h".into(), Elem::Pl(hh.clone())),
            ("g".into(), Elem::Pl(gg.clone())),
            ("f".into(), Elem::Pl(f.clone())),
            ("k".into(), Elem::Pl(k.clone())),
            ("w1".into(), Elem::Pl(w1.clone())),
            ("w2".into(), Elem::Pl(w2.clone())),
        ],
        word(&["w1", "w2"]),
        word(&["w2", "w1"]),
        Relation::Unequal,
        Pt::Rat(lambda.clone()),
    )?;

    Ok(Lemma31 {
        h: hh,
        g: gg,
        swapped,
        inverted,
        f,
        k,
        w1,
        w2,
        gamma,
        delta,
        lambda,
        mu,
        gamma_pre,
        k_pairs,
        f_pairs,
        cert,
    })
}
