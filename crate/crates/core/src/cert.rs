//! Self-contained witness certificates. A certificate names finitely many
//! group elements, two words over them, one evaluation point and the two
//! images; checking re-evaluates both words at the point and compares, so a
//! claim is verified by evaluation alone, without its construction recipe.
//!
//! Line-oriented text form:
//! ```text
//! # optional recipe lines
//! ELEM h = PL[(0,0),(1,2),(3,3)]
//! ELEM w1 = PL[(0,1)]
//! CLAIM w1·w2 ≠ w2·w1 AT 23/2: 3 vs 7/2
//! ```
//! A word is element names joined by "·", each optionally suffixed "^-1";
//! the literal "1" is the empty word (the identity).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::lex::{LexAut, Point};
use crate::plmap::PLMap;
use crate::rat::Rat;

/// A group element of either model family.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Elem {
    Pl(PLMap),
    Lex(LexAut),
}

impl Elem {
    pub fn is_identity(&self) -> bool {
        match self {
            Elem::Pl(f) => f.is_identity(),
            Elem::Lex(a) => a.is_identity(),
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Pl(m) => write!(f, "{}", m),
            Elem::Lex(a) => write!(f, "{}", a),
        }
    }
}

/// An evaluation point: a rational for PL certificates, a tower point for
/// lexicographic ones.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Pt {
    Rat(Rat),
    Point(Point),
}

impl fmt::Display for Pt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pt::Rat(r) => write!(f, "{}", r),
            Pt::Point(p) => write!(f, "{}", p),
        }
    }
}

impl std::str::FromStr for Pt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Pt> {
        let s = s.trim();
        if s.starts_with('(') {
            Ok(Pt::Point(s.parse()?))
        } else {
            Ok(Pt::Rat(s.parse()?))
        }
    }
}

/// One factor of a word: a named element, possibly inverted.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Letter {
    pub name: String,
    pub inverse: bool,
}

/// A word is applied left to right (right actions throughout).
pub type Word = Vec<Letter>;

pub fn word(names: &[&str]) -> Word {
    names
        .iter()
        .filter(|n| **n != "1")
        .map(|n| {
            let (name, inverse) = match n.strip_suffix("^-1") {
                Some(base) => (base, true),
                None => (*n, false),
            };
            Letter { name: name.to_string(), inverse }
        })
        .collect()
}

fn word_to_string(w: &Word) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.iter()
        .map(|l| if l.inverse { format!("{}^-1", l.name) } else { l.name.clone() })
        .collect::<Vec<_>>()
        .join("·")
}

fn word_from_str(s: &str) -> Result<Word> {
    let s = s.trim();
    if s == "1" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for tok in s.split('·') {
        let tok = tok.trim();
        let (name, inverse) = match tok.strip_suffix("^-1") {
            Some(base) => (base, true),
            None => (tok, false),
        };
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::MalformedCert(format!("bad word letter {:?}", tok)));
        }
        out.push(Letter { name: name.to_string(), inverse });
    }
    Ok(out)
}

/// The claimed relation between the two word images.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    Unequal,
    Equal,
}

/// An element-word certificate: elements, two words, an evaluation point and
/// the two stored images.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WitnessCert {
    pub recipe: Vec<String>,
    pub elements: Vec<(String, Elem)>,
    pub lhs: Word,
    pub rhs: Word,
    pub relation: Relation,
    pub point: Pt,
    pub lhs_image: Pt,
    pub rhs_image: Pt,
}

fn eval_word(elements: &BTreeMap<&str, &Elem>, w: &Word, p: &Pt) -> Result<Pt> {
    let mut cur = p.clone();
    for letter in w {
        let e = elements
            .get(letter.name.as_str())
            .ok_or_else(|| Error::MalformedCert(format!("unknown element {:?}", letter.name)))?;
        cur = match (e, cur) {
            (Elem::Pl(f), Pt::Rat(x)) => {
                Pt::Rat(if letter.inverse { f.eval_inverse(&x) } else { f.eval(&x) })
            }
            (Elem::Lex(a), Pt::Point(x)) => {
                Pt::Point(if letter.inverse { a.inverse().apply(&x) } else { a.apply(&x) })
            }
            _ => {
                return Err(Error::MalformedCert(format!(
                    "element {:?} does not act on the stored point",
                    letter.name
                )))
            }
        };
    }
    Ok(cur)
}

impl WitnessCert {
    /// Build a certificate, computing both images by evaluation. Fails if a
    /// word references an element that is not listed or the claimed relation
    /// does not actually hold at the point.
    pub fn build(
        recipe: Vec<String>,
        elements: Vec<(String, Elem)>,
        lhs: Word,
        rhs: Word,
        relation: Relation,
        point: Pt,
    ) -> Result<WitnessCert> {
        let map: BTreeMap<&str, &Elem> = elements.iter().map(|(n, e)| (n.as_str(), e)).collect();
        let lhs_image = eval_word(&map, &lhs, &point)?;
        let rhs_image = eval_word(&map, &rhs, &point)?;
        let ok = match relation {
            Relation::Unequal => lhs_image != rhs_image,
            Relation::Equal => lhs_image == rhs_image,
        };
        if !ok {
            return Err(Error::MalformedCert(format!(
                "claimed relation does not hold at {}: {} vs {}",
                point, lhs_image, rhs_image
            )));
        }
        Ok(WitnessCert { recipe, elements, lhs, rhs, relation, point, lhs_image, rhs_image })
    }

    /// The textual claim, e.g. "w1·w2 ≠ w2·w1 at 23/2".
    pub fn claim(&self) -> String {
        format!(
            "{} {} {} at {}",
            word_to_string(&self.lhs),
            match self.relation {
                Relation::Unequal => "≠",
                Relation::Equal => "=",
            },
            word_to_string(&self.rhs),
            self.point
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in &self.recipe {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        for (name, elem) in &self.elements {
            out.push_str(&format!("ELEM {} = {}\n", name, elem));
        }
        out.push_str(&format!(
            "CLAIM {} {} {} AT {}: {} vs {}\n",
            word_to_string(&self.lhs),
            match self.relation {
                Relation::Unequal => "≠",
                Relation::Equal => "=",
            },
            word_to_string(&self.rhs),
            self.point,
            self.lhs_image,
            self.rhs_image
        ));
        out
    }

    pub fn from_text(text: &str) -> Result<WitnessCert> {
        let mut recipe = Vec::new();
        let mut elements = Vec::new();
        let mut claim: Option<(Word, Word, Relation, Pt, Pt, Pt)> = None;
        for raw in text.lines() {
            let line = raw.trim_end();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                recipe.push(rest.trim_start().to_string());
            } else if let Some(rest) = line.strip_prefix("ELEM ") {
                let (name, body) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::MalformedCert("ELEM line without '='".into()))?;
                let name = name.trim().to_string();
                let body = body.trim();
                let elem = if body.starts_with("PL[") {
                    Elem::Pl(body.parse().map_err(|e| malformed(e, body))?)
                } else if body.starts_with("Lex{") {
                    Elem::Lex(body.parse().map_err(|e| malformed(e, body))?)
                } else {
                    return Err(Error::MalformedCert(format!("unknown element form {:?}", body)));
                };
                elements.push((name, elem));
            } else if let Some(rest) = line.strip_prefix("CLAIM ") {
                let (head, tail) = rest
                    .split_once(" AT ")
                    .ok_or_else(|| Error::MalformedCert("CLAIM line without AT".into()))?;
                let (lhs_s, relation, rhs_s) = if let Some((l, r)) = head.split_once(" ≠ ") {
                    (l, Relation::Unequal, r)
                } else if let Some((l, r)) = head.split_once(" = ") {
                    (l, Relation::Equal, r)
                } else {
                    return Err(Error::MalformedCert("CLAIM relation must be ≠ or =".into()));
                };
                let (point_s, images) = tail
                    .split_once(": ")
                    .ok_or_else(|| Error::MalformedCert("CLAIM missing images".into()))?;
                let (li, ri) = images
                    .split_once(" vs ")
                    .ok_or_else(|| Error::MalformedCert("CLAIM missing 'vs'".into()))?;
                claim = Some((
                    word_from_str(lhs_s)?,
                    word_from_str(rhs_s)?,
                    relation,
                    point_s.trim().parse().map_err(|e| malformed(e, point_s))?,
                    li.trim().parse().map_err(|e| malformed(e, li))?,
                    ri.trim().parse().map_err(|e| malformed(e, ri))?,
                ));
            } else {
                return Err(Error::MalformedCert(format!("unrecognized line {:?}", line)));
            }
        }
        let (lhs, rhs, relation, point, lhs_image, rhs_image) =
            claim.ok_or_else(|| Error::MalformedCert("no CLAIM line".into()))?;
        Ok(WitnessCert { recipe, elements, lhs, rhs, relation, point, lhs_image, rhs_image })
    }
}

fn malformed(e: Error, ctx: &str) -> Error {
    Error::MalformedCert(format!("{} (in {:?})", e, ctx))
}

/// Re-evaluates both stored words at the stored point and compares with the
/// stored images; true iff the claim is reproduced exactly. Words referencing
/// unknown elements are an error, not a failure.
pub fn check_cert(cert: &WitnessCert) -> Result<bool> {
    let map: BTreeMap<&str, &Elem> = cert.elements.iter().map(|(n, e)| (n.as_str(), e)).collect();
    let lhs = eval_word(&map, &cert.lhs, &cert.point)?;
    let rhs = eval_word(&map, &cert.rhs, &cert.point)?;
    if lhs != cert.lhs_image || rhs != cert.rhs_image {
        return Ok(false);
    }
    Ok(match cert.relation {
        Relation::Unequal => lhs != rhs,
        Relation::Equal => lhs == rhs,
    })
}
