//! Seeded deterministic generation of group elements. Conjugators are random
//! words of bounded length over a per-seed pool of bumps and translations
//! with small denominators, so all data stays exactly representable and the
//! same seed reproduces the same elements byte for byte.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lex::{Component, ComponentKind, LexAut, TowerModel};
use crate::plmap::{bump, PLMap};
use crate::rat::Rat;

/// Sampler parameters, recorded inside every sample set.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SamplePolicy {
    pub word_len_max: usize,
    pub pool_size: usize,
    pub denom_max: i64,
    pub numer_max: i64,
}

impl Default for SamplePolicy {
    fn default() -> Self {
        SamplePolicy { word_len_max: 4, pool_size: 8, denom_max: 16, numer_max: 32 }
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
    pub policy: SamplePolicy,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), policy: SamplePolicy::default() }
    }

    pub fn with_policy(seed: u64, policy: SamplePolicy) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), policy }
    }

    /// A rational with numerator and denominator bounded by the policy.
    pub fn rat(&mut self) -> Rat {
        let n = self.rng.random_range(-self.policy.numer_max..=self.policy.numer_max);
        let d = self.rng.random_range(1..=self.policy.denom_max);
        Rat::new(n, d)
    }

    pub fn nonzero_rat(&mut self) -> Rat {
        loop {
            let r = self.rat();
            if !r.is_zero() {
                return r;
            }
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn chance(&mut self, num: u32, den: u32) -> bool {
        self.rng.random_range(0..den) < num
    }

    /// Four strictly increasing small rationals.
    fn increasing4(&mut self) -> (Rat, Rat, Rat, Rat) {
        loop {
            let mut v = vec![self.rat(), self.rat(), self.rat(), self.rat()];
            v.sort();
            v.dedup();
            if v.len() == 4 {
                let d = v.pop().unwrap();
                let c = v.pop().unwrap();
                let b = v.pop().unwrap();
                let a = v.pop().unwrap();
                return (a, b, c, d);
            }
        }
    }

    /// One pool generator: a bump or a translation.
    pub fn pl_generator(&mut self) -> PLMap {
        if self.chance(2, 3) {
            let (a, b, c, d) = self.increasing4();
            bump(a, b, c, d).unwrap()
        } else {
            PLMap::translation(self.nonzero_rat())
        }
    }

    pub fn pl_pool(&mut self) -> Vec<PLMap> {
        (0..self.policy.pool_size).map(|_| self.pl_generator()).collect()
    }

    /// A random word of length 1..=word_len_max over the pool.
    pub fn pl_word(&mut self, pool: &[PLMap]) -> PLMap {
        let len = self.rng.random_range(1..=self.policy.word_len_max);
        let mut out = PLMap::identity();
        for _ in 0..len {
            let mut g = pool[self.index(pool.len())].clone();
            if self.chance(1, 2) {
                g = g.inverse();
            }
            out = out.compose(&g);
        }
        out
    }

    /// A nontrivial PL word; falls back to a fixed bump if the pool keeps
    /// cancelling (it essentially never does).
    pub fn pl_word_nontrivial(&mut self, pool: &[PLMap]) -> PLMap {
        for _ in 0..16 {
            let w = self.pl_word(pool);
            if !w.is_identity() {
                return w;
            }
        }
        bump(Rat::int(0), Rat::int(1), Rat::int(2), Rat::int(3)).unwrap()
    }

    fn component_generator(&mut self, kind: ComponentKind) -> Component {
        match kind {
            ComponentKind::Reg => Component::Reg(self.nonzero_rat()),
            ComponentKind::Pl2t => Component::Pl(self.pl_generator()),
        }
    }

    /// One tower generator: a top component, possibly decorated with an
    /// override acting deeper, or a pure override element.
    pub fn lex_generator(&mut self, model: &TowerModel) -> LexAut {
        self.lex_generator_at(model, 1)
    }

    fn lex_generator_at(&mut self, model: &TowerModel, level: usize) -> LexAut {
        let depth = model.depth();
        let top_active = level == depth || self.chance(1, 2);
        let top = if top_active {
            self.component_generator(model.kind_at(level))
        } else {
            Component::identity(model.kind_at(level))
        };
        let mut over = BTreeMap::new();
        if level < depth && (!top_active || self.chance(1, 3)) {
            let fibers = 1 + usize::from(self.chance(1, 4));
            for _ in 0..fibers {
                over.insert(self.rat(), self.lex_generator_at(model, level + 1));
            }
        }
        LexAut::new(top, over)
    }

    pub fn lex_pool(&mut self, model: &TowerModel) -> Vec<LexAut> {
        (0..self.policy.pool_size).map(|_| self.lex_generator(model)).collect()
    }

    pub fn lex_word(&mut self, model: &TowerModel, pool: &[LexAut]) -> LexAut {
        let len = self.rng.random_range(1..=self.policy.word_len_max);
        let mut out = LexAut::identity(model);
        for _ in 0..len {
            let mut g = pool[self.index(pool.len())].clone();
            if self.chance(1, 2) {
                g = g.inverse();
            }
            out = out.compose(&g).expect("pool elements share the model");
        }
        out
    }

    pub fn lex_word_nontrivial(&mut self, model: &TowerModel, pool: &[LexAut]) -> LexAut {
        for _ in 0..16 {
            let w = self.lex_word(model, pool);
            if !w.is_identity() {
                return w;
            }
        }
        self.lex_generator(model)
    }
}
