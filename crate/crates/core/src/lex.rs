//! Finite lexicographic towers ℚ^n under first-significant lexicographic
//! order, their automorphisms with finite override data, convex congruences,
//! spine, o-blocks, stabilizer predicates, induced actions and depression.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::plmap::{self, PLMap};
use crate::rat::Rat;

/// The two o-primitive component types a tower level can carry.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ComponentKind {
    /// o-2 transitive piecewise-linear automorphisms of ℚ.
    Pl2t,
    /// Regular abelian action: rational translations.
    Reg,
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentKind::Pl2t => write!(f, "PL2T"),
            ComponentKind::Reg => write!(f, "REG"),
        }
    }
}

/// A tower shape: one component kind per level, most significant first.
/// Depth is capped at 5.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TowerModel {
    kinds: Vec<ComponentKind>,
}

impl TowerModel {
    pub const MAX_DEPTH: usize = 5;

    pub fn new(kinds: Vec<ComponentKind>) -> Result<TowerModel> {
        if kinds.is_empty() || kinds.len() > Self::MAX_DEPTH {
            return Err(Error::DepthOutOfRange);
        }
        Ok(TowerModel { kinds })
    }

    pub fn depth(&self) -> usize {
        self.kinds.len()
    }

    pub fn kinds(&self) -> &[ComponentKind] {
        &self.kinds
    }

    /// Kind of the component acting on coordinate position `level` (1-based).
    pub fn kind_at(&self, level: usize) -> ComponentKind {
        self.kinds[level - 1]
    }

    /// A model is locally abelian iff its minimal spine component is abelian.
    pub fn locally_abelian(&self) -> bool {
        *self.kinds.last().unwrap() == ComponentKind::Reg
    }
}

impl fmt::Display for TowerModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, k) in self.kinds.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", k)?;
        }
        Ok(())
    }
}

/// A point of the tower: one rational per level, compared lexicographically
/// with the first coordinate most significant.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Point {
    coords: Vec<Rat>,
}

impl Point {
    pub fn new(coords: Vec<Rat>) -> Point {
        Point { coords }
    }

    pub fn of_i64(coords: &[i64]) -> Point {
        Point::new(coords.iter().map(|&c| Rat::int(c)).collect())
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl std::str::FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Point> {
        let s = s.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::parse(1, 1, format!("expected (r1,…,rn), got {:?}", s)))?;
        let mut coords = Vec::new();
        for part in inner.split(',') {
            coords.push(part.trim().parse::<Rat>()?);
        }
        Ok(Point::new(coords))
    }
}

/// One level's worth of automorphism data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Component {
    Pl(PLMap),
    Reg(Rat),
}

impl Component {
    pub fn identity(kind: ComponentKind) -> Component {
        match kind {
            ComponentKind::Pl2t => Component::Pl(PLMap::identity()),
            ComponentKind::Reg => Component::Reg(Rat::zero()),
        }
    }

    pub fn kind(&self) -> ComponentKind {
        match self {
            Component::Pl(_) => ComponentKind::Pl2t,
            Component::Reg(_) => ComponentKind::Reg,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Component::Pl(f) => f.is_identity(),
            Component::Reg(c) => c.is_zero(),
        }
    }

    pub fn apply(&self, x: &Rat) -> Rat {
        match self {
            Component::Pl(f) => f.eval(x),
            Component::Reg(c) => x + c,
        }
    }

    pub fn apply_inverse(&self, x: &Rat) -> Rat {
        match self {
            Component::Pl(f) => f.eval_inverse(x),
            Component::Reg(c) => x - c,
        }
    }

    pub fn compose(&self, other: &Component) -> Result<Component> {
        match (self, other) {
            (Component::Pl(a), Component::Pl(b)) => Ok(Component::Pl(a.compose(b))),
            (Component::Reg(a), Component::Reg(b)) => Ok(Component::Reg(a + b)),
            _ => Err(Error::ModelMismatch("component kinds differ".into())),
        }
    }

    pub fn inverse(&self) -> Component {
        match self {
            Component::Pl(f) => Component::Pl(f.inverse()),
            Component::Reg(c) => Component::Reg(-c),
        }
    }

    pub fn vee(&self, other: &Component) -> Result<Component> {
        match (self, other) {
            (Component::Pl(a), Component::Pl(b)) => Ok(Component::Pl(a.vee(b))),
            (Component::Reg(a), Component::Reg(b)) => Ok(Component::Reg(Rat::max(a, b))),
            _ => Err(Error::ModelMismatch("component kinds differ".into())),
        }
    }

    pub fn wedge(&self, other: &Component) -> Result<Component> {
        match (self, other) {
            (Component::Pl(a), Component::Pl(b)) => Ok(Component::Pl(a.wedge(b))),
            (Component::Reg(a), Component::Reg(b)) => Ok(Component::Reg(Rat::min(a, b))),
            _ => Err(Error::ModelMismatch("component kinds differ".into())),
        }
    }

    pub fn support(&self) -> IntervalSet {
        match self {
            Component::Pl(f) => f.support(),
            Component::Reg(c) => {
                if c.is_zero() {
                    IntervalSet::empty()
                } else {
                    IntervalSet::whole_line()
                }
            }
        }
    }

    /// A rational moved by the component, if any.
    pub fn moved_value(&self) -> Option<Rat> {
        match self {
            Component::Pl(f) => f.moved_value(),
            Component::Reg(c) => {
                if c.is_zero() {
                    None
                } else {
                    Some(Rat::zero())
                }
            }
        }
    }

    /// A rational where the two components differ, if they differ anywhere.
    pub fn distinguishing_value(a: &Component, b: &Component) -> Option<Rat> {
        match (a, b) {
            (Component::Pl(f), Component::Pl(g)) => PLMap::distinguishing_value(f, g),
            (Component::Reg(c), Component::Reg(d)) => {
                if c == d {
                    None
                } else {
                    Some(Rat::zero())
                }
            }
            _ => Some(Rat::zero()),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Pl(m) => write!(f, "{}", m),
            Component::Reg(c) => write!(f, "{}", c),
        }
    }
}

/// An automorphism of a finite lexicographic tower: a component acting on the
/// most significant coordinate plus finitely many per-fiber overrides for the
/// tail tower. Absent overrides act as the identity; canonical form prunes
/// identity overrides, so structural equality is equality of automorphisms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LexAut {
    top: Component,
    over: BTreeMap<Rat, LexAut>,
}

impl LexAut {
    pub fn new(top: Component, over: BTreeMap<Rat, LexAut>) -> LexAut {
        let over = over.into_iter().filter(|(_, a)| !a.is_identity()).collect();
        LexAut { top, over }
    }

    pub fn identity(model: &TowerModel) -> LexAut {
        LexAut { top: Component::identity(model.kind_at(1)), over: BTreeMap::new() }
    }

    /// Depth-1 wrapper around a single component.
    pub fn from_component(c: Component) -> LexAut {
        LexAut { top: c, over: BTreeMap::new() }
    }

    pub fn top(&self) -> &Component {
        &self.top
    }

    pub fn overrides(&self) -> &BTreeMap<Rat, LexAut> {
        &self.over
    }

    pub fn is_identity(&self) -> bool {
        self.top.is_identity() && self.over.is_empty()
    }

    /// Check component kinds against the model, levels `level..=depth`.
    pub fn validate(&self, model: &TowerModel, level: usize) -> Result<()> {
        if level > model.depth() {
            return Err(Error::ModelMismatch("element deeper than model".into()));
        }
        if self.top.kind() != model.kind_at(level) {
            return Err(Error::ModelMismatch(format!(
                "level {} expects {}, found {}",
                level,
                model.kind_at(level),
                self.top.kind()
            )));
        }
        if level == model.depth() && !self.over.is_empty() {
            return Err(Error::ModelMismatch("overrides below the bottom level".into()));
        }
        for sub in self.over.values() {
            sub.validate(model, level + 1)?;
        }
        Ok(())
    }

    /// Right action on a point: coordinate i maps through this level's
    /// component, deeper coordinates through the override at the original
    /// fiber index.
    pub fn apply(&self, p: &Point) -> Point {
        let mut out = Vec::with_capacity(p.dim());
        let mut cur: Option<&LexAut> = Some(self);
        for c in p.coords() {
            match cur {
                Some(a) => {
                    out.push(a.top.apply(c));
                    cur = a.over.get(c);
                }
                None => out.push(c.clone()),
            }
        }
        Point::new(out)
    }

    /// Image of a coordinate prefix (the action on an o-block label).
    pub fn apply_prefix(&self, prefix: &[Rat]) -> Vec<Rat> {
        let mut out = Vec::with_capacity(prefix.len());
        let mut cur: Option<&LexAut> = Some(self);
        for c in prefix {
            match cur {
                Some(a) => {
                    out.push(a.top.apply(c));
                    cur = a.over.get(c);
                }
                None => out.push(c.clone()),
            }
        }
        out
    }

    pub fn compose(&self, other: &LexAut) -> Result<LexAut> {
        let top = self.top.compose(&other.top)?;
        let mut keys: Vec<Rat> = self.over.keys().cloned().collect();
        for y in other.over.keys() {
            keys.push(self.top.apply_inverse(y));
        }
        keys.sort();
        keys.dedup();
        let mut over = BTreeMap::new();
        for x in keys {
            let mine = self.over.get(&x);
            let theirs = other.over.get(&self.top.apply(&x));
            let sub = match (mine, theirs) {
                (Some(a), Some(b)) => a.compose(b)?,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => continue,
            };
            over.insert(x, sub);
        }
        Ok(LexAut::new(top, over))
    }

    pub fn inverse(&self) -> LexAut {
        let top = self.top.inverse();
        let over = self
            .over
            .iter()
            .map(|(x, a)| (self.top.apply(x), a.inverse()))
            .collect();
        LexAut::new(top, over)
    }

    pub fn conjugate_by(&self, f: &LexAut) -> Result<LexAut> {
        f.inverse().compose(self)?.compose(f)
    }

    /// [f,g] = f⁻¹·g⁻¹·f·g.
    pub fn commutator(f: &LexAut, g: &LexAut) -> Result<LexAut> {
        f.inverse().compose(&g.inverse())?.compose(f)?.compose(g)
    }

    fn lattice_op(&self, other: &LexAut, take_max: bool) -> Result<LexAut> {
        let top = if take_max { self.top.vee(&other.top)? } else { self.top.wedge(&other.top)? };
        let mut over = BTreeMap::new();
        let mut keys: Vec<Rat> = self.over.keys().chain(other.over.keys()).cloned().collect();
        keys.sort();
        keys.dedup();
        for x in keys {
            let a = self.top.apply(&x);
            let b = other.top.apply(&x);
            let mine = self.over.get(&x);
            let theirs = other.over.get(&x);
            let pick_mine = if take_max { a > b } else { a < b };
            let pick_theirs = if take_max { b > a } else { b < a };
            let sub = if pick_mine {
                mine.cloned()
            } else if pick_theirs {
                theirs.cloned()
            } else {
                // tie of top images: recursive lattice operation on the tails
                match (mine, theirs) {
                    (None, None) => None,
                    (Some(l), None) => Some(l.lattice_op(&identity_like(l), take_max)?),
                    (None, Some(r)) => Some(identity_like(r).lattice_op(r, take_max)?),
                    (Some(l), Some(r)) => Some(l.lattice_op(r, take_max)?),
                }
            };
            if let Some(s) = sub {
                over.insert(x, s);
            }
        }
        Ok(LexAut::new(top, over))
    }

    /// Pointwise maximum in the lexicographic order.
    pub fn vee(&self, other: &LexAut) -> Result<LexAut> {
        self.lattice_op(other, true)
    }

    /// Pointwise minimum in the lexicographic order.
    pub fn wedge(&self, other: &LexAut) -> Result<LexAut> {
        self.lattice_op(other, false)
    }

    /// Follow overrides along a coordinate prefix; None means the identity
    /// tail acts there.
    pub fn walk_branch(&self, prefix: &[Rat]) -> Option<&LexAut> {
        let mut cur = self;
        for c in prefix {
            cur = cur.over.get(c)?;
        }
        Some(cur)
    }

    /// Some point moved by the automorphism, padded with zeros to `depth`.
    pub fn moved_point(&self, depth: usize) -> Option<Point> {
        fn go(a: &LexAut, acc: &mut Vec<Rat>) -> bool {
            if let Some(x) = a.top.moved_value() {
                acc.push(x);
                return true;
            }
            for (k, sub) in &a.over {
                acc.push(k.clone());
                if go(sub, acc) {
                    return true;
                }
                acc.pop();
            }
            false
        }
        let mut acc = Vec::new();
        if !go(self, &mut acc) {
            return None;
        }
        while acc.len() < depth {
            acc.push(Rat::zero());
        }
        Some(Point::new(acc))
    }

    /// A point where the two automorphisms differ, padded to `depth`.
    pub fn distinguishing_point(a: &LexAut, b: &LexAut, depth: usize) -> Option<Point> {
        fn go(a: &LexAut, b: &LexAut, acc: &mut Vec<Rat>) -> bool {
            if let Some(x) = Component::distinguishing_value(&a.top, &b.top) {
                acc.push(x);
                return true;
            }
            let mut keys: Vec<&Rat> = a.over.keys().chain(b.over.keys()).collect();
            keys.sort();
            keys.dedup();
            for k in keys {
                match (a.over.get(k), b.over.get(k)) {
                    (Some(sa), Some(sb)) => {
                        if sa != sb {
                            acc.push(k.clone());
                            if go(sa, sb, acc) {
                                return true;
                            }
                            acc.pop();
                        }
                    }
                    (Some(sa), None) | (None, Some(sa)) => {
                        // other side acts as the identity on this fiber
                        if let Some(p) = sa.moved_point(0) {
                            acc.push(k.clone());
                            acc.extend(p.coords().iter().cloned());
                            return true;
                        }
                    }
                    (None, None) => {}
                }
            }
            false
        }
        if a == b {
            return None;
        }
        let mut acc = Vec::new();
        if !go(a, b, &mut acc) {
            return None;
        }
        while acc.len() < depth {
            acc.push(Rat::zero());
        }
        Some(Point::new(acc))
    }
}

fn identity_like(a: &LexAut) -> LexAut {
    LexAut { top: Component::identity(a.top.kind()), over: BTreeMap::new() }
}

/// Text form: nested "Lex{top: <component>, over: {q1: <LexAut>, …}}".
impl fmt::Display for LexAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lex{{top: {}, over: {{", self.top)?;
        for (i, (k, v)) in self.over.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {}", k, v)?;
        }
        write!(f, "}}}}")
    }
}

/// Cursor-based parser for the nested LexAut text form.
struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Cursor<'a> {
        Cursor { s, pos: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(1, self.pos + 1, msg)
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(' ') {
            self.pos += 1;
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            Ok(())
        } else {
            Err(self.err(format!("expected {:?}", tok)))
        }
    }

    fn peek(&mut self, tok: &str) -> bool {
        self.skip_ws();
        self.rest().starts_with(tok)
    }

    /// Consume characters of a rational literal.
    fn parse_rat(&mut self) -> Result<Rat> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.s.as_bytes();
        while self.pos < self.s.len() {
            let c = bytes[self.pos] as char;
            if c.is_ascii_digit() || c == '-' || c == '/' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(self.err("expected rational"));
        }
        self.s[start..self.pos].parse().map_err(|_| self.err("invalid rational"))
    }

    fn parse_component(&mut self) -> Result<Component> {
        if self.peek("PL[") {
            let start = self.pos;
            let close = self.rest().find(']').ok_or_else(|| self.err("unterminated PL[...]"))?;
            self.pos += close + 1;
            Ok(Component::Pl(self.s[start..self.pos].parse()?))
        } else {
            Ok(Component::Reg(self.parse_rat()?))
        }
    }

    fn parse_lexaut(&mut self) -> Result<LexAut> {
        self.expect("Lex{")?;
        self.expect("top:")?;
        let top = self.parse_component()?;
        self.expect(",")?;
        self.expect("over:")?;
        self.expect("{")?;
        let mut over = BTreeMap::new();
        if !self.peek("}") {
            loop {
                let key = self.parse_rat()?;
                self.expect(":")?;
                let sub = self.parse_lexaut()?;
                over.insert(key, sub);
                if self.peek("}") {
                    break;
                }
                self.expect(",")?;
            }
        }
        self.expect("}")?;
        self.expect("}")?;
        Ok(LexAut::new(top, over))
    }
}

impl std::str::FromStr for LexAut {
    type Err = Error;

    fn from_str(s: &str) -> Result<LexAut> {
        let mut cur = Cursor::new(s.trim());
        let a = cur.parse_lexaut()?;
        cur.skip_ws();
        if !cur.rest().is_empty() {
            return Err(cur.err("trailing input"));
        }
        Ok(a)
    }
}

/// A convex congruence of the tower: points are related at level L iff they
/// agree on the first L−1 coordinates. Level 1 is universal, level depth+1 is
/// equality. Inclusion reverses the level order, so the levels form a chain.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct CongruenceLevel(pub usize);

impl CongruenceLevel {
    pub fn relates(&self, a: &Point, b: &Point) -> bool {
        let k = self.0 - 1;
        a.coords()[..k] == b.coords()[..k]
    }

    /// Strict containment as relations: higher level means finer classes.
    pub fn strictly_contains(&self, other: &CongruenceLevel) -> bool {
        self.0 < other.0
    }
}

/// An o-block: the set of points extending a coordinate prefix. Level L
/// blocks are the classes of the level-L congruence; level 1 is the whole
/// tower, level depth+1 blocks are singleton leaves outside the root system.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct OBlock {
    level: usize,
    prefix: Vec<Rat>,
}

impl OBlock {
    pub fn new(prefix: Vec<Rat>) -> OBlock {
        OBlock { level: prefix.len() + 1, prefix }
    }

    pub fn whole() -> OBlock {
        OBlock::new(Vec::new())
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn prefix(&self) -> &[Rat] {
        &self.prefix
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        p.coords().len() >= self.prefix.len() && p.coords()[..self.prefix.len()] == self.prefix[..]
    }

    /// The level-`level` block containing a point.
    pub fn of_point(p: &Point, level: usize) -> OBlock {
        OBlock::new(p.coords()[..level - 1].to_vec())
    }

    /// An interior point of the block, padded with zeros.
    pub fn sample_point(&self, depth: usize) -> Point {
        let mut coords = self.prefix.clone();
        while coords.len() < depth {
            coords.push(Rat::zero());
        }
        Point::new(coords)
    }
}

impl fmt::Display for OBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}(", self.level)?;
        for (i, c) in self.prefix.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

/// Checked application of a tower automorphism to a point.
pub fn lex_apply(model: &TowerModel, g: &LexAut, p: &Point) -> Result<Point> {
    if p.dim() != model.depth() {
        return Err(Error::ModelMismatch("point dimension differs from model depth".into()));
    }
    g.validate(model, 1)?;
    Ok(g.apply(p))
}

/// The smallest congruence relating two distinct points: one more than the
/// length of their longest common coordinate prefix.
pub fn congr_v(a: &Point, b: &Point) -> Result<CongruenceLevel> {
    if a == b {
        return Err(Error::IdenticalPoints);
    }
    let lcp = a
        .coords()
        .iter()
        .zip(b.coords())
        .take_while(|(x, y)| x == y)
        .count();
    Ok(CongruenceLevel(lcp + 1))
}

/// The largest congruence separating two distinct points; covered by V.
pub fn congr_u(a: &Point, b: &Point) -> Result<CongruenceLevel> {
    Ok(CongruenceLevel(congr_v(a, b)?.0 + 1))
}

/// The unique convex congruence having the block as a class.
pub fn kappa(block: &OBlock) -> CongruenceLevel {
    CongruenceLevel(block.level)
}

/// The spine: every congruence realized as V(α,β), i.e. levels 1..=depth.
pub fn spine(model: &TowerModel) -> Vec<CongruenceLevel> {
    (1..=model.depth()).map(CongruenceLevel).collect()
}

/// The spine together with a witnessing pair of points for each level.
pub fn spine_with_witnesses(model: &TowerModel) -> Vec<(CongruenceLevel, Point, Point)> {
    let d = model.depth();
    spine(model)
        .into_iter()
        .map(|lvl| {
            let a = Point::new(vec![Rat::zero(); d]);
            let mut bc = vec![Rat::zero(); d];
            bc[lvl.0 - 1] = Rat::one();
            (lvl, a, Point::new(bc))
        })
        .collect()
}

/// Setwise stabilizer membership: the block maps onto itself.
pub fn in_st(g: &LexAut, block: &OBlock) -> bool {
    g.apply_prefix(block.prefix()) == block.prefix()
}

/// Rigid stabilizer membership: the support is confined to the block.
pub fn in_rst(g: &LexAut, block: &OBlock) -> bool {
    let mut cur = g;
    for c in block.prefix() {
        if !cur.top.is_identity() {
            return false;
        }
        if cur.over.keys().any(|k| k != c) {
            return false;
        }
        match cur.over.get(c) {
            Some(sub) => cur = sub,
            None => return true,
        }
    }
    true
}

/// Pointwise stabilizer membership: every point of the block is fixed.
pub fn in_ptstab(g: &LexAut, block: &OBlock) -> bool {
    let mut cur = g;
    for c in block.prefix() {
        if cur.top.apply(c) != *c {
            return false;
        }
        match cur.over.get(c) {
            Some(sub) => cur = sub,
            None => return true,
        }
    }
    cur.is_identity()
}

/// A point of the block moved by g, if one exists; witnesses !in_ptstab.
pub fn moved_point_in_block(g: &LexAut, block: &OBlock, depth: usize) -> Option<Point> {
    let mut cur = g;
    for c in block.prefix() {
        if cur.top.apply(c) != *c {
            // the whole block moves; any of its points will do
            return Some(block.sample_point(depth));
        }
        cur = cur.over.get(c)?;
    }
    cur.moved_point(depth - block.prefix().len()).map(|tail| {
        let mut coords = block.prefix().to_vec();
        coords.extend(tail.coords().iter().cloned());
        Point::new(coords)
    })
}

/// Q_Δ membership: supported inside the block and displacing some point at
/// exactly the block's congruence. The override tree is searched for a
/// displacement at the block's own level.
pub fn in_q(h: &LexAut, block: &OBlock) -> bool {
    if !in_rst(h, block) {
        return false;
    }
    match h.walk_branch(block.prefix()) {
        Some(branch) => !branch.top.is_identity(),
        None => false,
    }
}

/// The canonical block for which h ∈ Q_Δ, if one exists: descend through
/// single-fiber identity levels until the first nontrivial component.
pub fn q_block_of(h: &LexAut) -> Option<OBlock> {
    let mut prefix = Vec::new();
    let mut cur = h;
    loop {
        if !cur.top.is_identity() {
            return Some(OBlock::new(prefix));
        }
        if cur.over.len() != 1 {
            return None;
        }
        let (k, sub) = cur.over.iter().next().unwrap();
        prefix.push(k.clone());
        cur = sub;
    }
}

/// The automorphism induced on the child blocks of a stabilized block.
pub fn induced_action(model: &TowerModel, g: &LexAut, block: &OBlock) -> Result<Component> {
    if !in_st(g, block) {
        return Err(Error::NotInStabilizer);
    }
    match g.walk_branch(block.prefix()) {
        Some(branch) => Ok(branch.top.clone()),
        None => Ok(Component::identity(model.kind_at(block.level))),
    }
}

/// Depression onto a finite list of pairwise disjoint, setwise invariant
/// blocks: agrees with g there, identity elsewhere.
pub fn lex_dep(model: &TowerModel, g: &LexAut, blocks: &[OBlock]) -> Result<LexAut> {
    for b in blocks {
        if b.level() > model.depth() {
            return Err(Error::ModelMismatch("block deeper than the model".into()));
        }
    }
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            let n = a.prefix().len().min(b.prefix().len());
            if a.prefix()[..n] == b.prefix()[..n] {
                return Err(Error::OverlappingBlocks);
            }
        }
    }
    for b in blocks {
        if !in_st(g, b) {
            return Err(Error::NotInvariant);
        }
    }
    fn build(model: &TowerModel, level: usize, g: &LexAut, blocks: &[&OBlock], at: usize) -> LexAut {
        if blocks.iter().any(|b| b.prefix().len() == at) {
            // a block covering this whole branch: keep g's action here
            return g.clone();
        }
        let mut groups: BTreeMap<Rat, Vec<&OBlock>> = BTreeMap::new();
        for b in blocks {
            groups.entry(b.prefix()[at].clone()).or_default().push(b);
        }
        let id_sub = |m: &TowerModel, lvl: usize| LexAut {
            top: Component::identity(m.kind_at(lvl)),
            over: BTreeMap::new(),
        };
        let mut over = BTreeMap::new();
        for (c, grp) in groups {
            let sub_g = g.walk_branch(std::slice::from_ref(&c));
            let sub_g_owned;
            let sub_ref = match sub_g {
                Some(s) => s,
                None => {
                    sub_g_owned = id_sub(model, level + 1);
                    &sub_g_owned
                }
            };
            over.insert(c, build(model, level + 1, sub_ref, &grp, at + 1));
        }
        LexAut::new(Component::identity(model.kind_at(level)), over)
    }
    if blocks.is_empty() {
        return Ok(LexAut::identity(model));
    }
    let refs: Vec<&OBlock> = blocks.iter().collect();
    Ok(build(model, 1, g, &refs, 0))
}

/// Transitivity witness: an explicit automorphism sending α to β, built from
/// one interpolation or translation per level along α's branch.
pub fn transitivity_witness(model: &TowerModel, a: &Point, b: &Point) -> LexAut {
    fn build(model: &TowerModel, level: usize, a: &[Rat], b: &[Rat]) -> LexAut {
        let top = match model.kind_at(level) {
            ComponentKind::Reg => Component::Reg(&b[0] - &a[0]),
            ComponentKind::Pl2t => {
                Component::Pl(plmap::interpolate(&[(a[0].clone(), b[0].clone())]).unwrap())
            }
        };
        let mut over = BTreeMap::new();
        if a.len() > 1 {
            over.insert(a[0].clone(), build(model, level + 1, &a[1..], &b[1..]));
        }
        LexAut::new(top, over)
    }
    build(model, 1, a.coords(), b.coords())
}

/// Builds a LexAut acting only inside the given block's branch, with the
/// supplied component at the block's own level.
pub fn element_at_block(model: &TowerModel, block: &OBlock, component: Component) -> LexAut {
    fn build(model: &TowerModel, level: usize, prefix: &[Rat], component: Component) -> LexAut {
        if prefix.is_empty() {
            return LexAut::new(component, BTreeMap::new());
        }
        let mut over = BTreeMap::new();
        over.insert(prefix[0].clone(), build(model, level + 1, &prefix[1..], component));
        LexAut::new(Component::identity(model.kind_at(level)), over)
    }
    build(model, 1, block.prefix(), component)
}

/// A canonical member of Q_Δ moving the given coordinate value at the
/// block's level: a bump over a PL2T component, a unit translation over REG.
pub fn q_element(model: &TowerModel, block: &OBlock, target: &Rat) -> LexAut {
    let component = match model.kind_at(block.level) {
        ComponentKind::Pl2t => Component::Pl(
            plmap::bump(
                target - &Rat::one(),
                target.clone(),
                target + &Rat::one(),
                target + &Rat::int(2),
            )
            .unwrap(),
        ),
        ComponentKind::Reg => Component::Reg(Rat::one()),
    };
    element_at_block(model, block, component)
}
