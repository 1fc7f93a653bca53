//! Desk-scale centralizer checks for h ∈ Q_Δ. The first-order side tests f
//! against C_G(W_h) (= the pointwise stabilizer of Δ): pointwise stabilizers
//! get commuting evidence over a fresh W-sample, anything else gets a
//! W_h-member that visibly fails to commute. The second-order side refutes
//! membership of f ∈ st(Δ) ∖ rst(Δ) in the double centralizer (= rst(Δ)) by
//! exhibiting y in the pointwise stabilizer with [y, f·dep(f,Δ)⁻¹] ≠ 1.

use crate::cert::{word, Elem, Pt, Relation, WitnessCert};
use crate::error::{Error, Result};
use crate::lex::{
    congr_v, element_at_block, in_ptstab, in_q, in_rst, in_st, lex_dep, moved_point_in_block,
    q_element, transitivity_witness, Component, ComponentKind, LexAut, OBlock, TowerModel,
};
use crate::plmap::bump;
use crate::rat::Rat;
use crate::witness::lemma4x::{lemma41b_hinted, Lemma41Outcome};
use crate::witness::sample_w;

/// First-order outcome: f against C_G(W_h).
#[derive(Clone, Debug)]
pub enum FirstOrder {
    /// f fixes Δ pointwise: commuting evidence over a fresh W-sample.
    Consistent { evidence: Vec<WitnessCert> },
    /// A member of W_h that fails to commute with f.
    Refuted { witness: LexAut, cert: WitnessCert },
}

/// Second-order refutation: y ∈ ptstab(Δ) ⊆ C_G(W_h) not commuting with the
/// off-block residue of f, so f ∉ C²_G(W_h) = rst(Δ).
#[derive(Clone, Debug)]
pub struct SecondOrder {
    pub y: LexAut,
    pub f_residue: LexAut,
    pub cert: WitnessCert,
}

#[derive(Clone, Debug)]
pub struct CentralizerVerdict {
    pub first: FirstOrder,
    pub second: Option<SecondOrder>,
}

pub fn centralizer_refute(
    model: &TowerModel,
    h: &LexAut,
    f: &LexAut,
    block: &OBlock,
    seed: u64,
) -> Result<CentralizerVerdict> {
    if !in_q(h, block) {
        return Err(Error::NotInQ);
    }
    let second = if in_st(f, block) && !in_rst(f, block) {
        Some(second_order(model, f, block)?)
    } else {
        None
    };
    let first = if in_ptstab(f, block) {
        FirstOrder::Consistent { evidence: commuting_evidence(model, h, f, block, seed)? }
    } else {
        first_order_refute(model, h, f, block)?
    };
    Ok(CentralizerVerdict { first, second })
}

/// f fixes Δ pointwise, hence commutes with everything supported in Δ: check
/// it against every member of a fresh W-sample, exactly.
fn commuting_evidence(
    model: &TowerModel,
    h: &LexAut,
    f: &LexAut,
    block: &OBlock,
    seed: u64,
) -> Result<Vec<WitnessCert>> {
    let depth = model.depth();
    let ws = sample_w(model, h, 3, seed)?;
    let mut evidence = Vec::new();
    for (i, member) in ws.members.iter().enumerate() {
        let m = &member.value;
        assert_eq!(
            m.compose(f)?,
            f.compose(m)?,
            "a pointwise stabilizer of the block commutes with W_h members"
        );
        let p = m.moved_point(depth).unwrap_or_else(|| block.sample_point(depth));
        evidence.push(WitnessCert::build(
            vec![format!("W-sample member {} commutes with the pointwise stabilizer", i)],
            vec![("m".into(), Elem::Lex(m.clone())), ("f".into(), Elem::Lex(f.clone()))],
            word(&["m", "f"]),
            word(&["f", "m"]),
            Relation::Equal,
            Pt::Point(p),
        )?);
    }
    Ok(evidence)
}

/// f moves a point δ of Δ: conjugate h so its support covers δ, then the
/// support-fixing machinery yields w ∈ X_{h^g} ⊆ W_h with [w, f] ≠ 1.
fn first_order_refute(
    model: &TowerModel,
    h: &LexAut,
    f: &LexAut,
    block: &OBlock,
) -> Result<FirstOrder> {
    let depth = model.depth();
    let delta = moved_point_in_block(f, block, depth)
        .expect("first_order_refute requires f to move a point of the block");
    let alpha = h.moved_point(depth).expect("members of Q are nontrivial");
    let carrier = transitivity_witness(model, &alpha, &delta);
    debug_assert!(in_rst(&carrier, block));
    let h2 = h.conjugate_by(&carrier)?;
    debug_assert!(in_q(&h2, block));
    debug_assert_ne!(h2.apply(&delta), delta);

    match lemma41b_hinted(model, &h2, f, block, Some(&delta))? {
        Lemma41Outcome::Refuted { g, cert } => {
            let witness = LexAut::commutator(&h2.inverse(), &h2.conjugate_by(&g)?)?;
            Ok(FirstOrder::Refuted { witness, cert })
        }
        Lemma41Outcome::FixesSupport { .. } => {
            unreachable!("the hint point lies in supp(h^g) and moves under f")
        }
    }
}

/// Strip f to its off-block residue and exhibit y supported strictly between
/// a moved point and its image; [y, residue] ≠ 1 follows from the support
/// displacement and is certified by evaluation.
fn second_order(model: &TowerModel, f: &LexAut, block: &OBlock) -> Result<SecondOrder> {
    let depth = model.depth();
    let f0 = lex_dep(model, f, std::slice::from_ref(block))?;
    let residue = f.compose(&f0.inverse())?;
    assert!(!residue.is_identity(), "f outside rst(Δ) leaves an off-block residue");

    let alpha = residue.moved_point(depth).unwrap();
    let alpha_f = residue.apply(&alpha);
    let lvl = congr_v(&alpha, &alpha_f)?.0;
    let c = alpha.coords()[lvl - 1].clone();
    let c_img = alpha_f.coords()[lvl - 1].clone();
    let (lo, hi) = if c < c_img { (c, c_img) } else { (c_img, c) };

    let y = if lvl < depth {
        // a whole block fits strictly between α and αf
        let mut prefix = alpha.coords()[..lvl - 1].to_vec();
        prefix.push(Rat::midpoint(&lo, &hi));
        q_element(model, &OBlock::new(prefix), &Rat::zero())
    } else {
        // the displacement is at the bottom level: a bump between the two
        // coordinate values stays inside (α, αf)
        if model.kind_at(depth) != ComponentKind::Pl2t {
            return Err(Error::AbelianComponent);
        }
        let third = (&hi - &lo) / Rat::int(3);
        let y_comp = bump(lo.clone(), &lo + &third, &lo + &(&third * &Rat::int(2)), hi.clone())?;
        element_at_block(model, &OBlock::new(alpha.coords()[..depth - 1].to_vec()), Component::Pl(y_comp))
    };
    assert!(in_ptstab(&y, block), "y is supported strictly off the block");

    let p = y.moved_point(depth).unwrap();
    let cert = WitnessCert::build(
        vec![
            "y lies in the pointwise stabilizer of the block but [y, f·dep(f,Δ)^-1] ≠ 1".to_string(),
            format!("moved point {} with image {}", alpha, alpha_f),
        ],
        vec![("y".into(), Elem::Lex(y.clone())), ("fd".into(), Elem::Lex(residue.clone()))],
        word(&["y", "fd"]),
        word(&["fd", "y"]),
        Relation::Unequal,
        Pt::Point(p),
    )?;
    Ok(SecondOrder { y, f_residue: residue, cert })
}
