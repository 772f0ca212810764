//! Conway polynomial by skein resolution to descending diagrams.
//!
//! At a crossing that is first reached from below, the diagram `D` is
//! resolved as `∇(D) = ∇(switch D) ± z ∇(smooth D)`, with `+` when the
//! crossing is positive (D plays K₊) and `-` when negative (D plays K₋).
//! Switching removes one violation while keeping the basepoints;
//! smoothing removes a crossing. A diagram without violations is an
//! unlink, with `∇ = 1` for one component and `0` otherwise.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{CanonicalKey, Diagram, Sign, SkeinTriple};
use crate::floer;
use crate::poly::{LaurentPoly, Scale};

/// Which violating crossing to resolve at.
#[derive(Clone, Debug)]
pub enum SiteRule {
    First,
    /// Uniformly random among the violations, from a seeded generator.
    Random(u64),
}

/// Memoized skein resolver. The memo is keyed on canonical diagram form.
pub struct SkeinResolver {
    memo: HashMap<CanonicalKey, LaurentPoly>,
    rule: SiteRule,
    rng: ChaCha8Rng,
    nodes: usize,
}

impl Default for SkeinResolver {
    fn default() -> Self {
        Self::new(SiteRule::First)
    }
}

impl SkeinResolver {
    pub fn new(rule: SiteRule) -> Self {
        let seed = match rule {
            SiteRule::First => 0,
            SiteRule::Random(s) => s,
        };
        Self { memo: HashMap::new(), rule, rng: ChaCha8Rng::seed_from_u64(seed), nodes: 0 }
    }

    /// Number of resolution nodes expanded so far (memo misses).
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn conway(&mut self, d: &Diagram) -> LaurentPoly {
        self.resolve(d.clone(), true)
    }

    fn pick(&mut self, violations: &[usize]) -> Option<usize> {
        match self.rule {
            _ if violations.is_empty() => None,
            SiteRule::First => Some(violations[0]),
            SiteRule::Random(_) => Some(violations[self.rng.gen_range(0..violations.len())]),
        }
    }

    /// `rebase` replaces the basepoints by the canonical ones; switch
    /// children keep their parent's so the violation count drops.
    fn resolve(&mut self, d: Diagram, rebase: bool) -> LaurentPoly {
        let d = d.reduce_r1();
        if d.is_split() {
            return LaurentPoly::zero(Scale::Z);
        }
        if d.crossing_count() == 0 {
            return LaurentPoly::one(Scale::Z);
        }
        let (key, canon) = d.canonical();
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        self.nodes += 1;
        let d = if rebase { canon } else { d };
        let value = match self.pick(&d.violations()) {
            None if d.component_count() == 1 => LaurentPoly::one(Scale::Z),
            None => LaurentPoly::zero(Scale::Z),
            Some(x) => {
                let switched = d.switch_crossing(x).expect("site in range");
                let smoothed = d.smooth_crossing(x).expect("site in range");
                let rest = self.resolve(switched, false);
                let zero = self.resolve(smoothed, true);
                let term = &LaurentPoly::z() * &zero;
                match d.crossings()[x].sign() {
                    Sign::Positive => rest + term,
                    Sign::Negative => rest - term,
                }
            }
        };
        self.memo.insert(key, value.clone());
        value
    }
}

/// Conway polynomial `∇(z)` of a diagram.
pub fn conway(d: &Diagram) -> LaurentPoly {
    SkeinResolver::default().conway(d)
}

/// Alexander polynomial with Conway's normalization, `∇(t^{1/2} - t^{-1/2})`.
pub fn alexander(d: &Diagram) -> LaurentPoly {
    conway(d).conway_to_alexander().expect("Conway polynomial is in z")
}

/// Outcome of checking `χ̃(K₊) - χ̃(K₋) = (t^{1/2} - t^{-1/2}) χ̃(K₀)`.
#[derive(Clone, Debug)]
pub struct SkeinReport {
    pub site: usize,
    pub chi_tilde_plus: LaurentPoly,
    pub chi_tilde_minus: LaurentPoly,
    pub chi_tilde_zero: LaurentPoly,
    pub lhs: LaurentPoly,
    pub rhs: LaurentPoly,
    pub passed: bool,
}

pub fn skein_verify(t: &SkeinTriple) -> SkeinReport {
    let mut resolver = SkeinResolver::default();
    skein_verify_with(t, &mut resolver)
}

/// As [`skein_verify`], sharing a resolver (and its memo) across calls.
pub fn skein_verify_with(t: &SkeinTriple, resolver: &mut SkeinResolver) -> SkeinReport {
    let chi = |d: &Diagram, res: &mut SkeinResolver| {
        let delta = res.conway(d).conway_to_alexander().expect("z scale");
        floer::normalized_chi(&delta)
    };
    let chi_tilde_plus = chi(&t.plus, resolver);
    let chi_tilde_minus = chi(&t.minus, resolver);
    let chi_tilde_zero = chi(&t.zero, resolver);
    let lhs = &chi_tilde_plus - &chi_tilde_minus;
    let rhs = &LaurentPoly::q() * &chi_tilde_zero;
    let passed = lhs == rhs;
    SkeinReport { site: t.site, chi_tilde_plus, chi_tilde_minus, chi_tilde_zero, lhs, rhs, passed }
}
