//! Constructive realizations of the centralizer lemmas: X_h/W_h samplers,
//! the explicit witness pairs, the two-sided centralizer check and the
//! o-primitivity report, all emitting evaluation-checkable certificates.

mod centralizer;
mod lemma31;
mod lemma4x;
mod oprim;

pub use centralizer::{centralizer_refute, CentralizerVerdict, FirstOrder, SecondOrder};
pub use lemma31::{lemma31, Lemma31};
pub use lemma4x::{lemma41b, lemma42b, support_points, Lemma41Outcome, Lemma42, Lemma42Case};
pub use oprim::{oprim_report, OprimReport, OprimTrial, OprimVerdict};

use crate::cert::{word, Elem, Pt, Relation, WitnessCert};
use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::lex::{element_at_block, in_st, q_block_of, Component, LexAut, OBlock, TowerModel};
use crate::plmap::bump;
use crate::rat::Rat;
use crate::sampler::{SamplePolicy, Sampler};

/// One sampled entry. `value == [base_used⁻¹, base_used^conjugator]` always;
/// `base_used` is h itself for X-samples and the (possibly normalized)
/// conjugate h^outer for W-samples.
#[derive(Clone, Debug)]
pub struct Member {
    pub outer: LexAut,
    pub base_used: LexAut,
    pub conjugator: LexAut,
    pub value: LexAut,
    pub trivial: bool,
    /// Non-commutation pair certificate for accepted W-members.
    pub witness: Option<WitnessCert>,
    /// Commuting evidence for rejected or provably trivial candidates.
    pub rejected: Option<WitnessCert>,
}

/// A seeded sample of X_h or W_h.
#[derive(Clone, Debug)]
pub struct SampleSet {
    pub base: LexAut,
    pub block: OBlock,
    pub seed: u64,
    pub policy: SamplePolicy,
    pub members: Vec<Member>,
}

impl SampleSet {
    /// Recompute every member value from its base and conjugator.
    pub fn verify(&self) -> Result<bool> {
        for m in &self.members {
            let again = LexAut::commutator(
                &m.base_used.inverse(),
                &m.base_used.conjugate_by(&m.conjugator)?,
            )?;
            if again != m.value {
                return Ok(false);
            }
            if m.trivial != m.value.is_identity() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A positive bump supported inside a fundamental interval (α, αh) of h,
/// when h displaces some PL2T coordinate. Members [h⁻¹, h^g] for such g are
/// never trivial.
pub fn fundamental_conjugator(model: &TowerModel, h: &LexAut) -> Option<LexAut> {
    let block = q_block_of(h)?;
    let comp = h.walk_branch(block.prefix())?.top().clone();
    let f = match comp {
        Component::Pl(f) => f,
        Component::Reg(_) => return None,
    };
    let support = f.support();
    let alpha = support.parts().first()?.interior_point();
    let image = f.eval(&alpha);
    let (lo, hi) = if alpha < image { (alpha, image) } else { (image, alpha) };
    let third = (&hi - &lo) / Rat::int(3);
    let b = bump(lo.clone(), &lo + &third, &lo + &(&third * &Rat::int(2)), hi).ok()?;
    Some(element_at_block(model, &block, Component::Pl(b)))
}

/// Sample n members of X_h = {[h⁻¹, h^g] : g ∈ G}. The first member always
/// uses g = 1 (trivial, kept and flagged); the second uses a conjugator
/// supported in a fundamental interval of h when one exists.
pub fn sample_x(model: &TowerModel, h: &LexAut, n: usize, seed: u64) -> Result<SampleSet> {
    if h.is_identity() {
        return Err(Error::IdentityBase);
    }
    let block = q_block_of(h).unwrap_or_else(OBlock::whole);
    let mut sampler = Sampler::new(seed);
    let pool = sampler.lex_pool(model);
    let mut members = Vec::with_capacity(n);

    let push = |g: LexAut, members: &mut Vec<Member>| -> Result<()> {
        let value = LexAut::commutator(&h.inverse(), &h.conjugate_by(&g)?)?;
        let trivial = value.is_identity();
        members.push(Member {
            outer: LexAut::identity(model),
            base_used: h.clone(),
            conjugator: g,
            value,
            trivial,
            witness: None,
            rejected: None,
        });
        Ok(())
    };

    if n >= 1 {
        push(LexAut::identity(model), &mut members)?;
    }
    if n >= 2 {
        if let Some(g) = fundamental_conjugator(model, h) {
            push(g, &mut members)?;
            assert!(
                !members.last().unwrap().trivial,
                "a conjugator inside a fundamental interval yields a nontrivial member"
            );
        }
    }
    while members.len() < n {
        let g = sampler.lex_word(model, &pool);
        push(g, &mut members)?;
    }
    Ok(SampleSet { base: h.clone(), block, seed, policy: sampler.policy, members })
}

/// Sample W_h = ∪{X_{h^g} : g ∈ st(Δ), [X_h, X_{h^g}] ≠ 1} for the block Δ
/// with h ∈ Q_Δ. Accepted members carry the non-commuting pair produced by
/// the pair constructions behind the lemma42 suite; candidates outside
/// st(Δ) are recorded
/// with disjoint-support commuting evidence. In a locally abelian model at
/// the minimal block every candidate commutator is provably trivial, so the
/// sample is empty and each candidate carries an exact equality certificate.
pub fn sample_w(model: &TowerModel, h: &LexAut, n: usize, seed: u64) -> Result<SampleSet> {
    let block = q_block_of(h).ok_or(Error::NotInQ)?;
    let depth = model.depth();
    let mut sampler = Sampler::new(seed);
    let pool = sampler.lex_pool(model);
    let mut members = Vec::new();

    if model.locally_abelian() && block.level() == depth {
        for i in 0..n {
            let outer = sampler.lex_word(model, &pool);
            let k = h.conjugate_by(&outer)?;
            let inner = sampler.lex_word(model, &pool);
            let value = LexAut::commutator(&k.inverse(), &k.conjugate_by(&inner)?)?;
            assert!(
                value.is_identity(),
                "every X-candidate over a minimal abelian block is trivial"
            );
            let cert = WitnessCert::build(
                vec![format!(
                    "candidate {} of X_(h^g) over the minimal abelian block is the identity",
                    i
                )],
                vec![("k".into(), Elem::Lex(k.clone())), ("u".into(), Elem::Lex(inner.clone()))],
                word(&["k", "u^-1", "k^-1", "u", "k^-1", "u^-1", "k", "u"]),
                word(&["1"]),
                Relation::Equal,
                Pt::Point(block.sample_point(depth)),
            )?;
            members.push(Member {
                outer,
                base_used: k,
                conjugator: inner,
                value,
                trivial: true,
                witness: None,
                rejected: Some(cert),
            });
        }
        return Ok(SampleSet { base: h.clone(), block, seed, policy: sampler.policy, members });
    }

    // a fixed nontrivial representative of X_h for rejection evidence
    let xh_conj = fundamental_conjugator(model, h);
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    while accepted < n && attempts < 20 * n + 8 {
        attempts += 1;
        // the first candidate is the designated g = 1; later ones alternate
        // between in-block elements and unconstrained words
        let g = if attempts == 1 {
            LexAut::identity(model)
        } else if sampler.chance(1, 2) {
            let target = sampler.rat();
            crate::lex::q_element(model, &block, &target)
        } else {
            sampler.lex_word(model, &pool)
        };
        if in_st(&g, &block) {
            let data = lemma42b(model, h, &g, &block)?;
            members.push(Member {
                outer: g,
                base_used: data.a_base,
                conjugator: data.a_conj,
                value: data.a,
                trivial: false,
                witness: Some(data.cert),
                rejected: None,
            });
            accepted += 1;
        } else if let Some(u0) = &xh_conj {
            // Δg ≠ Δ: the rigid stabilizers commute elementwise, so the
            // representative pair commutes with disjoint supports
            let xh = LexAut::commutator(&h.inverse(), &h.conjugate_by(u0)?)?;
            let k = h.conjugate_by(&g)?;
            let u0g = u0.conjugate_by(&g)?;
            let xk = xh.conjugate_by(&g)?;
            debug_assert_eq!(
                xk,
                LexAut::commutator(&k.inverse(), &k.conjugate_by(&u0g)?)?
            );
            assert_eq!(xh.compose(&xk)?, xk.compose(&xh)?);
            let p = xh
                .moved_point(depth)
                .unwrap_or_else(|| block.sample_point(depth));
            let cert = WitnessCert::build(
                vec![
                    "candidate outside st(Δ): members of X_h and X_(h^g) have disjoint support"
                        .to_string(),
                ],
                vec![("xh".into(), Elem::Lex(xh.clone())), ("xk".into(), Elem::Lex(xk.clone()))],
                word(&["xh", "xk"]),
                word(&["xk", "xh"]),
                Relation::Equal,
                Pt::Point(p),
            )?;
            members.push(Member {
                outer: g,
                base_used: k,
                conjugator: u0g,
                value: xk,
                trivial: false,
                witness: None,
                rejected: Some(cert),
            });
        }
    }
    assert!(accepted >= n.min(1), "the designated g = 1 candidate is always accepted");
    Ok(SampleSet { base: h.clone(), block, seed, policy: sampler.policy, members })
}

/// Supports of two interval sets at the same coordinate, for disjointness
/// arguments in tests and reports.
pub fn supports_disjoint(a: &IntervalSet, b: &IntervalSet) -> bool {
    a.is_disjoint_from(b)
}
