//! Tower-level witness constructions. `lemma41b` certifies that an element
//! failing to fix the support of h ∈ Q_Δ cannot commute with all of X_h;
//! `lemma42b` exhibits a non-commuting pair (b, a) with b ∈ X_h and
//! a ∈ X_{h^g} for g ∈ st(Δ), dispatching on the block structure below Δ.

use crate::cert::{word, Elem, Pt, Relation, WitnessCert};
use crate::error::{Error, Result};
use crate::lex::{
    congr_v, element_at_block, in_q, in_st, lex_dep, q_element, transitivity_witness, Component,
    ComponentKind, LexAut, OBlock, Point, TowerModel,
};
use crate::plmap::bump;
use crate::rat::Rat;
use crate::witness::lemma31::lemma31;

/// Sampled points of supp(h), read off the override tree: one batch per
/// displacement site, padded with varying tails up to `limit` points.
pub fn support_points(model: &TowerModel, h: &LexAut, limit: usize) -> Vec<Point> {
    let depth = model.depth();
    let mut sites: Vec<(Vec<Rat>, Component)> = Vec::new();
    fn collect(a: &LexAut, prefix: &mut Vec<Rat>, out: &mut Vec<(Vec<Rat>, Component)>) {
        if !a.top().is_identity() {
            out.push((prefix.clone(), a.top().clone()));
        }
        for (k, sub) in a.overrides() {
            prefix.push(k.clone());
            collect(sub, prefix, out);
            prefix.pop();
        }
    }
    collect(h, &mut Vec::new(), &mut sites);

    let mut points = Vec::new();
    let fills = [0i64, 1, -1, 2, -2, 3, -3, 5, -5, 7];
    'outer: for fill in fills {
        for (prefix, comp) in &sites {
            let moved: Vec<Rat> = match comp {
                Component::Reg(_) => (0..25).map(|j| Rat::int(fill + j)).collect(),
                Component::Pl(f) => {
                    let mut vs = Vec::new();
                    for part in f.support().parts() {
                        match (part.lo().fin(), part.hi().fin()) {
                            (Some(a), Some(b)) => {
                                // interior grid points of a bounded part
                                let width = b - a;
                                for j in 1..25 {
                                    vs.push(a + &(&width * &Rat::new(j, 25)));
                                }
                            }
                            (None, Some(b)) => {
                                for j in 1..25 {
                                    vs.push(b - &Rat::int(j));
                                }
                            }
                            (Some(a), None) => {
                                for j in 1..25 {
                                    vs.push(a + &Rat::int(j));
                                }
                            }
                            (None, None) => {
                                for j in 0..25 {
                                    vs.push(Rat::int(j));
                                }
                            }
                        }
                    }
                    vs
                }
            };
            for v in moved {
                if comp.apply(&v) == v {
                    continue;
                }
                let mut coords = prefix.clone();
                coords.push(v);
                while coords.len() < depth {
                    coords.push(Rat::int(fill));
                }
                let p = Point::new(coords);
                if !points.contains(&p) {
                    points.push(p);
                    if points.len() >= limit {
                        break 'outer;
                    }
                }
            }
        }
    }
    points
}

/// Outcome of the support-fixing check.
#[derive(Clone, Debug)]
pub enum Lemma41Outcome {
    /// f fixed every sampled support point; the checked points are returned.
    FixesSupport { checked: Vec<Point> },
    /// g ∈ Q_Δ' with [[h⁻¹,h^g], f] ≠ 1, certified by evaluation.
    Refuted { g: LexAut, cert: WitnessCert },
}

pub fn lemma41b(
    model: &TowerModel,
    h: &LexAut,
    f: &LexAut,
    block: &OBlock,
) -> Result<Lemma41Outcome> {
    lemma41b_hinted(model, h, f, block, None)
}

/// Like `lemma41b` but with a caller-supplied moved support point tried
/// first (used by the centralizer machinery, which knows one).
pub fn lemma41b_hinted(
    model: &TowerModel,
    h: &LexAut,
    f: &LexAut,
    block: &OBlock,
    hint: Option<&Point>,
) -> Result<Lemma41Outcome> {
    if !in_q(h, block) {
        return Err(Error::NotInQ);
    }
    let depth = model.depth();
    let mut pts = Vec::new();
    if let Some(p) = hint {
        if h.apply(p) != *p {
            pts.push(p.clone());
        }
    }
    pts.extend(support_points(model, h, 20));

    let beta = match pts.iter().find(|p| f.apply(p) != **p) {
        None => return Ok(Lemma41Outcome::FixesSupport { checked: pts }),
        Some(b) => b.clone(),
    };

    let lh = congr_v(&beta, &h.apply(&beta))?.0;
    let lf = congr_v(&beta, &f.apply(&beta))?.0;
    let lvl = lh.max(lf) + 1;

    let (g, route) = if lvl <= depth {
        // a block strictly inside both V-blocks exists; it moves under both
        // h and f, and any member of its Q works
        let dprime = OBlock::of_point(&beta, lvl);
        (q_element(model, &dprime, &beta.coords()[lvl - 1]), format!("block level {}", lvl))
    } else {
        // both displacements happen at the bottom level: build a positive
        // bump inside an interval around β cleared of its h- and f-images
        if model.kind_at(depth) != ComponentKind::Pl2t {
            return Err(Error::DepthExhausted);
        }
        let prefix = &beta.coords()[..depth - 1];
        let bd = &beta.coords()[depth - 1];
        let mut movers: Vec<(Component, bool)> = Vec::new();
        for m in [h, f] {
            if congr_v(&beta, &m.apply(&beta))?.0 == depth {
                let comp = m
                    .walk_branch(prefix)
                    .map(|b| b.top().clone())
                    .unwrap_or(Component::identity(ComponentKind::Pl2t));
                let up = comp.apply(bd) > *bd;
                movers.push((comp, up));
            }
        }
        let mut eps = Rat::one();
        let mut found = None;
        for _ in 0..64 {
            let p = bd - &eps;
            let q = bd + &eps;
            let clear = movers.iter().all(|(c, up)| {
                if *up {
                    c.apply(&p) > q
                } else {
                    c.apply(&q) < p
                }
            });
            if clear {
                found = Some((p, q));
                break;
            }
            eps = eps / Rat::int(2);
        }
        let (p, q) = found.ok_or(Error::BisectionExhausted)?;
        let g_comp = bump(p, bd.clone(), Rat::midpoint(bd, &q), q)?;
        (
            element_at_block(model, &OBlock::new(prefix.to_vec()), Component::Pl(g_comp)),
            "minimal-level interval".to_string(),
        )
    };

    let c = LexAut::commutator(&h.inverse(), &h.conjugate_by(&g)?)?;
    assert!(!c.is_identity(), "X_h member for g in Q of the inner block is nontrivial");
    let cf = c.compose(f)?;
    let fc = f.compose(&c)?;
    let p = LexAut::distinguishing_point(&cf, &fc, depth)
        .expect("c and f cannot commute when the inner block moves under f");
    let cert = WitnessCert::build(
        vec![
            "c = [h^-1,h^g] fails to commute with f".to_string(),
            format!("route: {}; beta={}", route, beta),
        ],
        vec![("c".into(), Elem::Lex(c)), ("f".into(), Elem::Lex(f.clone()))],
        word(&["c", "f"]),
        word(&["f", "c"]),
        Relation::Unequal,
        Pt::Point(p),
    )?;
    Ok(Lemma41Outcome::Refuted { g, cert })
}

/// Which construction branch produced the pair.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Lemma42Case {
    /// Some child block moves under both h and h^g and two strictly smaller
    /// block levels exist.
    CommonChild,
    /// Δ is a minimal block with a common moved point.
    MinimalBlock,
    /// Δ covers a minimal block; the minimal-case construction runs one
    /// level up on the induced actions. Flagged distinctly.
    CoversMinimal,
    /// Every child is fixed by h or by h^g: the disjoint-support pair
    /// construction runs on the induced component actions.
    InducedLemma31,
}

#[derive(Clone, Debug)]
pub struct Lemma42 {
    pub case: Lemma42Case,
    /// Member of X_{h'} for the (possibly normalized) base h'.
    pub b: LexAut,
    /// Member of X_{k'} for k' conjugate to h'; the sample-set member.
    pub a: LexAut,
    /// Base element whose X contains `a`: a == [a_base⁻¹, a_base^{a_conj}].
    pub a_base: LexAut,
    pub a_conj: LexAut,
    pub cert: WitnessCert,
}

pub fn lemma42b(model: &TowerModel, h: &LexAut, g: &LexAut, block: &OBlock) -> Result<Lemma42> {
    if !in_q(h, block) {
        return Err(Error::NotInQ);
    }
    if !in_st(g, block) {
        return Err(Error::NotInStabilizer);
    }
    let depth = model.depth();
    let level = block.level();
    let k = h.conjugate_by(g)?;

    let u = crate::lex::induced_action(model, h, block)?;
    let v = crate::lex::induced_action(model, &k, block)?;
    debug_assert!(!u.is_identity() && !v.is_identity());
    let common = u.support().intersect(&v.support());

    if common.is_empty() {
        return lemma42_case_iii(model, h, g, &k, block, &u, &v);
    }
    if level + 2 <= depth {
        lemma42_case_i(model, h, &k, block, &common)
    } else if level == depth {
        lemma42_case_ii(model, h, &k, block, &u, &v, &common, Lemma42Case::MinimalBlock)
    } else {
        // level == depth - 1: Δ covers a minimal block
        lemma42_case_ii(model, h, &k, block, &u, &v, &common, Lemma42Case::CoversMinimal)
    }
}

/// Non-minimal case: Γ a child moved by both; y ∈ Q_Γ and x ∈ Q of a child
/// of Γ are built by transitivity and depression; the pair fails to commute
/// at a point of supp(x).
fn lemma42_case_i(
    model: &TowerModel,
    h: &LexAut,
    k: &LexAut,
    block: &OBlock,
    common: &crate::interval::IntervalSet,
) -> Result<Lemma42> {
    let depth = model.depth();
    let level = block.level();
    let child_index = common.parts()[0].interior_point();

    let mut beta_coords = block.prefix().to_vec();
    beta_coords.push(child_index.clone());
    while beta_coords.len() < depth {
        beta_coords.push(Rat::zero());
    }
    let beta = Point::new(beta_coords.clone());

    // y ∈ Q_Δ' for Δ' = Γ: moves β to a different child of Δ'
    let dprime = OBlock::new(beta_coords[..level].to_vec());
    let mut bprime = beta_coords.clone();
    bprime[level] = &bprime[level] + &Rat::one();
    let yprime = transitivity_witness(model, &beta, &Point::new(bprime));
    let y = lex_dep(model, &yprime, std::slice::from_ref(&dprime))?;
    debug_assert!(in_q(&y, &dprime));

    // x ∈ Q_Δ'' for Δ'' the child of Δ' containing β, with β ∈ supp(x)
    let dsecond = OBlock::new(beta_coords[..level + 1].to_vec());
    let mut bsecond = beta_coords.clone();
    bsecond[level + 1] = &bsecond[level + 1] + &Rat::one();
    let xprime = transitivity_witness(model, &beta, &Point::new(bsecond));
    let x = lex_dep(model, &xprime, std::slice::from_ref(&dsecond))?;
    debug_assert!(in_q(&x, &dsecond));

    let b = LexAut::commutator(&h.inverse(), &h.conjugate_by(&y)?)?;
    let a = LexAut::commutator(&k.inverse(), &k.conjugate_by(&x)?)?;

    let cert = WitnessCert::build(
        vec![
            "b = [h^-1,h^y] ∈ X_h and a = [k^-1,k^x] ∈ X_k fail to commute".to_string(),
            format!("common moved child index {}; blocks {} ⊃ {}", child_index, dprime, dsecond),
        ],
        vec![("b".into(), Elem::Lex(b.clone())), ("a".into(), Elem::Lex(a.clone()))],
        word(&["b", "a"]),
        word(&["a", "b"]),
        Relation::Unequal,
        Pt::Point(beta),
    )?;
    Ok(Lemma42 { case: Lemma42Case::CommonChild, b, a, a_base: k.clone(), a_conj: x, cert })
}

/// Minimal case (and its covers-minimal adaptation one level up): positive
/// bumps y then x inside a cleared interval around a common moved value; the
/// certificate separates β·a^b from β·a.
#[allow(clippy::too_many_arguments)]
fn lemma42_case_ii(
    model: &TowerModel,
    h: &LexAut,
    k: &LexAut,
    block: &OBlock,
    u: &Component,
    v: &Component,
    common: &crate::interval::IntervalSet,
    case: Lemma42Case,
) -> Result<Lemma42> {
    let depth = model.depth();
    let level = block.level();
    if model.kind_at(level) != ComponentKind::Pl2t {
        return Err(Error::AbelianComponent);
    }
    let delta = common.parts()[0].interior_point();

    // working interval (p,q) around δ cleared of its u- and v-translates in
    // both directions
    let bound_low = |c: &Component| {
        if c.apply(&delta) > delta { c.apply_inverse(&delta) } else { c.apply(&delta) }
    };
    let l = Rat::max(&bound_low(u), &bound_low(v));
    let p = Rat::midpoint(&l, &delta);
    let bound_high = |c: &Component| {
        if c.apply(&delta) > delta { c.apply(&p) } else { c.apply_inverse(&p) }
    };
    let r = Rat::min(&bound_high(u), &bound_high(v));
    let q = Rat::midpoint(&delta, &r);
    for c in [u, v] {
        if c.apply(&delta) > delta {
            assert!(c.apply(&p) > q, "interval clears its upward translate");
        } else {
            assert!(c.apply(&q) < p, "interval clears its downward translate");
        }
    }

    let y_comp = bump(p.clone(), delta.clone(), Rat::midpoint(&delta, &q), q.clone())?;
    let delta_y = y_comp.eval(&delta);
    let step = (&delta_y - &delta) / Rat::int(4);
    let beta_val = &delta + &step;
    let x_comp = bump(delta.clone(), beta_val.clone(), &delta + &(&step * &Rat::int(2)), delta_y)?;

    let y = element_at_block(model, block, Component::Pl(y_comp));
    let x = element_at_block(model, block, Component::Pl(x_comp.clone()));
    let b = LexAut::commutator(&h.inverse(), &h.conjugate_by(&y)?)?;
    let a = LexAut::commutator(&k.inverse(), &k.conjugate_by(&x)?)?;

    let mut coords = block.prefix().to_vec();
    coords.push(beta_val.clone());
    while coords.len() < depth {
        coords.push(Rat::zero());
    }
    let beta = Point::new(coords);

    // β·a^b = β on the working coordinate while β·a = β·x² moves
    let lhs = b.inverse().compose(&a)?.compose(&b)?.apply(&beta);
    let rhs = a.apply(&beta);
    assert_eq!(lhs.coords()[level - 1], beta_val);
    assert_eq!(rhs.coords()[level - 1], x_comp.eval(&x_comp.eval(&beta_val)));
    assert_ne!(lhs, rhs);

    let flag = match case {
        Lemma42Case::CoversMinimal => "covers-minimal adaptation: run one level up",
        _ => "minimal block",
    };
    let cert = WitnessCert::build(
        vec![
            "a^b ≠ a for a = [k^-1,k^x] ∈ X_k, b = [h^-1,h^y] ∈ X_h".to_string(),
            flag.to_string(),
            format!("working interval ({},{}) around {}", p, q, delta),
        ],
        vec![("b".into(), Elem::Lex(b.clone())), ("a".into(), Elem::Lex(a.clone()))],
        word(&["b^-1", "a", "b"]),
        word(&["a"]),
        Relation::Unequal,
        Pt::Point(beta),
    )?;
    Ok(Lemma42 { case, b, a, a_base: k.clone(), a_conj: x, cert })
}

/// Every child is fixed by h or by k: the induced actions have disjoint
/// supports, so the disjoint-support construction applies to them; the
/// resulting elements
/// lift through the block's branch.
fn lemma42_case_iii(
    model: &TowerModel,
    h: &LexAut,
    g: &LexAut,
    k: &LexAut,
    block: &OBlock,
    u: &Component,
    v: &Component,
) -> Result<Lemma42> {
    let depth = model.depth();
    let level = block.level();
    let (u_pl, g_pl) = match (u, crate::lex::induced_action(model, g, block)?) {
        (Component::Pl(a), Component::Pl(b)) => (a.clone(), b),
        _ => return Err(Error::AbelianComponent),
    };
    debug_assert_eq!(&u_pl.conjugate_by(&g_pl), match v {
        Component::Pl(m) => m,
        _ => unreachable!(),
    });

    let data = lemma31(&u_pl, &g_pl)?;

    // mirror the normalization at the tower level
    let mut h_full = if data.swapped { k.clone() } else { h.clone() };
    let g_full = if data.swapped { g.inverse() } else { g.clone() };
    if data.inverted {
        h_full = h_full.inverse();
    }
    let f_hat = element_at_block(model, block, Component::Pl(data.f.clone()));
    let k_hat = element_at_block(model, block, Component::Pl(data.k.clone()));
    let b = LexAut::commutator(&h_full.inverse(), &h_full.conjugate_by(&f_hat)?)?;
    let k2_full = h_full.conjugate_by(&g_full)?;
    let a = LexAut::commutator(&k2_full.inverse(), &k2_full.conjugate_by(&k_hat)?)?;

    let mut coords = block.prefix().to_vec();
    coords.push(data.lambda.clone());
    while coords.len() < depth {
        coords.push(Rat::zero());
    }
    let point = Point::new(coords);
    let lhs = b.compose(&a)?.apply(&point);
    let rhs = a.compose(&b)?.apply(&point);
    assert_eq!(lhs.coords()[level - 1], data.gamma);
    assert_eq!(rhs.coords()[level - 1], data.gamma_pre);

    let cert = WitnessCert::build(
        vec![
            "induced actions have disjoint supports: pair built on the components".to_string(),
            format!(
                "component normalization: swapped={} inverted={}",
                data.swapped, data.inverted
            ),
        ],
        vec![("b".into(), Elem::Lex(b.clone())), ("a".into(), Elem::Lex(a.clone()))],
        word(&["b", "a"]),
        word(&["a", "b"]),
        Relation::Unequal,
        Pt::Point(point),
    )?;
    Ok(Lemma42 { case: Lemma42Case::InducedLemma31, b, a, a_base: k2_full, a_conj: k_hat, cert })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::check_cert;
    use crate::plmap::PLMap;

    fn pl_model(depth: usize) -> TowerModel {
        TowerModel::new(vec![ComponentKind::Pl2t; depth]).unwrap()
    }

    fn pl_bump() -> PLMap {
        bump(Rat::int(0), Rat::int(1), Rat::int(2), Rat::int(3)).unwrap()
    }

    #[test]
    fn lemma41_identity_fixes_support() {
        let m = pl_model(3);
        let omega = OBlock::whole();
        let h = LexAut::from_component(Component::Pl(pl_bump()));
        let out = lemma41b(&m, &h, &LexAut::identity(&m), &omega).unwrap();
        match out {
            Lemma41Outcome::FixesSupport { checked } => assert!(checked.len() >= 10),
            _ => panic!("identity must fix the support"),
        }
    }

    #[test]
    fn lemma41_deep_route() {
        let m = pl_model(3);
        let omega = OBlock::whole();
        // h moves level-1 coordinates; f acts inside a fiber that lies on the
        // support sampling grid of h (multiples of 3/25 inside (0,3))
        let h = LexAut::from_component(Component::Pl(pl_bump()));
        let inner = bump(Rat::int(-1), Rat::int(0), Rat::int(1), Rat::int(2)).unwrap();
        let f = element_at_block(&m, &OBlock::new(vec![Rat::new(3, 5)]), Component::Pl(inner));
        let out = lemma41b(&m, &h, &f, &omega).unwrap();
        match out {
            Lemma41Outcome::Refuted { g, cert } => {
                assert!(check_cert(&cert).unwrap());
                assert!(!g.is_identity());
            }
            _ => panic!("f moves support points of h"),
        }
    }

    #[test]
    fn lemma41_pointwise_stabilizer_fixes_support() {
        // f fixing Δ pointwise fixes every sampled support point of h ∈ Q_Δ
        let m = pl_model(2);
        let fiber = OBlock::new(vec![Rat::zero()]);
        let h = q_element(&m, &fiber, &Rat::zero());
        let f = q_element(&m, &OBlock::new(vec![Rat::int(7)]), &Rat::zero());
        assert!(crate::lex::in_ptstab(&f, &fiber));
        match lemma41b(&m, &h, &f, &fiber).unwrap() {
            Lemma41Outcome::FixesSupport { checked } => {
                assert!(checked.len() >= 20);
                for p in &checked {
                    assert_eq!(f.apply(p), *p);
                }
            }
            _ => panic!("a pointwise stabilizer cannot move the support"),
        }
    }

    #[test]
    fn lemma41_minimal_route() {
        let m = pl_model(1);
        let omega = OBlock::whole();
        let h = LexAut::from_component(Component::Pl(pl_bump()));
        // f moves the same bottom-level points as h
        let f = LexAut::from_component(Component::Pl(
            bump(Rat::new(1, 2), Rat::one(), Rat::new(3, 2), Rat::int(2)).unwrap(),
        ));
        match lemma41b(&m, &h, &f, &omega).unwrap() {
            Lemma41Outcome::Refuted { cert, .. } => assert!(check_cert(&cert).unwrap()),
            _ => panic!("f moves support points of h"),
        }
    }

    #[test]
    fn lemma42_minimal_case() {
        let m = pl_model(1);
        let omega = OBlock::whole();
        let h = LexAut::from_component(Component::Pl(pl_bump()));
        let out = lemma42b(&m, &h, &LexAut::identity(&m), &omega).unwrap();
        assert_eq!(out.case, Lemma42Case::MinimalBlock);
        assert!(check_cert(&out.cert).unwrap());
        // a really is the recomputed commutator of its base
        let recomputed = LexAut::commutator(
            &out.a_base.inverse(),
            &out.a_base.conjugate_by(&out.a_conj).unwrap(),
        )
        .unwrap();
        assert_eq!(recomputed, out.a);
    }

    #[test]
    fn lemma42_common_child_case() {
        let m = pl_model(3);
        let omega = OBlock::whole();
        let h = LexAut::from_component(Component::Pl(pl_bump()));
        let out = lemma42b(&m, &h, &LexAut::identity(&m), &omega).unwrap();
        assert_eq!(out.case, Lemma42Case::CommonChild);
        assert!(check_cert(&out.cert).unwrap());
    }

    #[test]
    fn lemma42_covers_minimal_case() {
        let m = pl_model(2);
        let omega = OBlock::whole();
        let h = LexAut::from_component(Component::Pl(pl_bump()));
        let out = lemma42b(&m, &h, &LexAut::identity(&m), &omega).unwrap();
        assert_eq!(out.case, Lemma42Case::CoversMinimal);
        assert!(check_cert(&out.cert).unwrap());
    }

    #[test]
    fn lemma42_induced_case() {
        let m = pl_model(2);
        let omega = OBlock::whole();
        let h = LexAut::from_component(Component::Pl(pl_bump()));
        // conjugating by a large translation at the top makes the induced
        // supports disjoint
        let g = LexAut::from_component(Component::Pl(PLMap::translation(Rat::int(50))));
        let out = lemma42b(&m, &h, &g, &omega).unwrap();
        assert_eq!(out.case, Lemma42Case::InducedLemma31);
        assert!(check_cert(&out.cert).unwrap());
    }

    #[test]
    fn lemma42_rejects_bad_inputs() {
        let m = pl_model(2);
        let h = LexAut::from_component(Component::Pl(pl_bump()));
        let fiber = OBlock::new(vec![Rat::zero()]);
        assert_eq!(
            lemma42b(&m, &h, &LexAut::identity(&m), &fiber).unwrap_err(),
            Error::NotInQ
        );
        let t = LexAut::from_component(Component::Pl(PLMap::translation(Rat::one())));
        let h2 = q_element(&m, &fiber, &Rat::zero());
        assert_eq!(lemma42b(&m, &h2, &t, &fiber).unwrap_err(), Error::NotInStabilizer);
    }

    #[test]
    fn locally_abelian_minimal_block_has_no_pair() {
        let m = TowerModel::new(vec![ComponentKind::Pl2t, ComponentKind::Reg]).unwrap();
        let fiber = OBlock::new(vec![Rat::zero()]);
        let h = element_at_block(&m, &fiber, Component::Reg(Rat::one()));
        assert_eq!(
            lemma42b(&m, &h, &LexAut::identity(&m), &fiber).unwrap_err(),
            Error::AbelianComponent
        );
    }
}
