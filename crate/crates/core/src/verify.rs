//! Property sweep over a knot catalog.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::catalog::Catalog;
use crate::diagram::{Diagram, SkeinTriple};
use crate::floer::{self, FiberedVerdict};
use crate::fox;
use crate::poly::LaurentPoly;
use crate::skein::SkeinResolver;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// Skein Δ equals the Fox calculus Δ.
    Oracle,
    /// `Δ(t) = Δ(t^{-1})` and `Δ(1) = 1`.
    Normalization,
    /// `|Δ(-1)|` equals the catalog determinant.
    Determinant,
    /// Catalog genus lies in `[deg Δ, seifert bound]`.
    Genus,
    /// No catalog-fibered knot is declared not fibered, and fibered knots are pinned.
    Fibered,
    /// `χ̃₊ - χ̃₋ = q χ̃₀` at every crossing.
    Skein,
    /// The case-split identities for `χ` at every crossing.
    Triangle,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Oracle,
        Check::Normalization,
        Check::Determinant,
        Check::Genus,
        Check::Fibered,
        Check::Skein,
        Check::Triangle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Oracle => "oracle",
            Check::Normalization => "normalization",
            Check::Determinant => "determinant",
            Check::Genus => "genus",
            Check::Fibered => "fibered",
            Check::Skein => "skein",
            Check::Triangle => "triangle",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub check: Check,
    pub knot: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub knots: usize,
    pub triples: usize,
    /// Number of evaluations per check.
    pub evaluated: BTreeMap<Check, usize>,
    pub failures: Vec<Failure>,
    pub warnings: Vec<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failure_count(&self, check: Check) -> usize {
        self.failures.iter().filter(|f| f.check == check).count()
    }

    fn record(&mut self, check: Check, knot: &str, ok: bool, detail: impl FnOnce() -> String) {
        *self.evaluated.entry(check).or_default() += 1;
        if !ok {
            self.failures.push(Failure { check, knot: knot.to_string(), detail: detail() });
        }
    }

    pub fn to_json(&self) -> Value {
        let checks: serde_json::Map<String, Value> = self
            .evaluated
            .iter()
            .map(|(c, n)| (c.name().to_string(), json!({ "evaluated": n, "failed": self.failure_count(*c) })))
            .collect();
        json!({
            "passed": self.passed(),
            "knots": self.knots,
            "triples": self.triples,
            "checks": checks,
            "failures": self.failures.iter().map(|f| json!({
                "check": f.check, "knot": f.knot, "detail": f.detail,
            })).collect::<Vec<_>>(),
            "warnings": self.warnings,
        })
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        writeln!(f, "{} knots, {} skein triples", self.knots, self.triples)?;
        for (c, n) in &self.evaluated {
            let failed = self.failure_count(*c);
            let status = if failed == 0 { "ok" } else { "FAIL" };
            writeln!(f, "  {:<14} {status:<4} {}/{} passed", c.name(), n - failed, n)?;
        }
        for fl in self.failures.iter().take(20) {
            writeln!(f, "  {} {}: {}", fl.check, fl.knot, fl.detail)?;
        }
        if self.failures.len() > 20 {
            writeln!(f, "  ... {} more failures", self.failures.len() - 20)?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Runs the selected checks using the skein engine.
pub fn sweep(catalog: &Catalog, checks: &[Check]) -> SweepReport {
    let mut resolver = SkeinResolver::default();
    sweep_with(catalog, checks, &mut |d| resolver.conway(d).conway_to_alexander().expect("z scale"))
}

/// Runs the selected checks with `engine` computing every Alexander
/// polynomial; the Fox oracle stays independent.
pub fn sweep_with(catalog: &Catalog, checks: &[Check], engine: &mut dyn FnMut(&Diagram) -> LaurentPoly) -> SweepReport {
    let mut report = SweepReport::default();
    if catalog.is_empty() {
        report.warnings.push("catalog is empty; nothing was checked".into());
        return report;
    }
    let on = |c: Check| checks.contains(&c);
    for rec in catalog.records() {
        report.knots += 1;
        let name = rec.name.as_str();
        let d = match rec.diagram() {
            Ok(d) if d.is_knot() => d,
            Ok(d) => {
                for &c in checks {
                    report.record(c, name, false, || format!("{} components, expected a knot", d.component_count()));
                }
                continue;
            }
            Err(e) => {
                for &c in checks {
                    report.record(c, name, false, || e.to_string());
                }
                continue;
            }
        };
        let delta = engine(&d);
        if on(Check::Oracle) {
            match fox::alexander_via_fox(&d) {
                Ok(f) => report.record(Check::Oracle, name, f == delta, || format!("skein {delta}, fox {f}")),
                Err(e) => report.record(Check::Oracle, name, false, || e.to_string()),
            }
        }
        if on(Check::Normalization) {
            let at_one: BigInt = delta.terms().map(|(_, c)| c.clone()).sum();
            let ok = delta.is_symmetric() && at_one == BigInt::from(1) && delta.has_integer_t_exponents();
            report.record(Check::Normalization, name, ok, || format!("Δ = {delta}"));
        }
        if on(Check::Determinant) {
            let det = floer::determinant(&delta);
            report.record(Check::Determinant, name, det == BigInt::from(rec.det), || {
                format!("|Δ(-1)| = {det}, catalog {}", rec.det)
            });
        }
        if on(Check::Genus) || on(Check::Fibered) {
            let bound = d.seifert_genus_bound().expect("knot diagrams are connected");
            let ev = floer::FiberedEvidence::from_bracket(&delta, bound);
            if on(Check::Genus) {
                let ok = ev.alexander_degree <= rec.genus && rec.genus <= ev.seifert_bound;
                report.record(Check::Genus, name, ok, || {
                    format!("genus {} outside [{}, {}]", rec.genus, ev.alexander_degree, ev.seifert_bound)
                });
            }
            if on(Check::Fibered) {
                let ok = !rec.fibered || ev.verdict == FiberedVerdict::ConsistentWithFibered;
                report.record(Check::Fibered, name, ok, || format!("{:?} on a fibered knot", ev.verdict));
            }
        }
        if on(Check::Skein) || on(Check::Triangle) {
            for t in SkeinTriple::all(&d) {
                report.triples += 1;
                let [p, m, z] = [&t.plus, &t.minus, &t.zero].map(&mut *engine);
                if on(Check::Skein) {
                    let lhs = floer::normalized_chi(&p) - floer::normalized_chi(&m);
                    let rhs = LaurentPoly::q() * floer::normalized_chi(&z);
                    report.record(Check::Skein, name, lhs == rhs, || {
                        format!("crossing {}: {lhs} != {rhs}", t.site)
                    });
                }
                if on(Check::Triangle) {
                    let tr = floer::triangle_from_alexander(&t, &p, &m, &z);
                    report.record(Check::Triangle, name, tr.passed, || {
                        format!("crossing {} ({:?}): residual {}", t.site, tr.case, tr.residual)
                    });
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Catalog {
        let full = Catalog::bundled();
        Catalog::parse(
            &full
                .records()
                .iter()
                .take(6)
                .map(|r| serde_json::to_string(r).unwrap() + "\n")
                .collect::<String>(),
        )
        .unwrap()
    }

    #[test]
    fn clean_checks_pass() {
        let checks = [Check::Oracle, Check::Normalization, Check::Determinant, Check::Genus, Check::Fibered, Check::Skein];
        let r = sweep(&small(), &checks);
        assert!(r.passed(), "{r}");
        assert_eq!(r.knots, 6);
        assert!(r.triples > 0);
    }

    #[test]
    fn injected_sign_bug_is_caught() {
        let mut res = SkeinResolver::default();
        let mut buggy = |d: &Diagram| -res.conway(d).conway_to_alexander().unwrap();
        let r = sweep_with(&small(), &[Check::Oracle, Check::Normalization], &mut buggy);
        assert!(!r.passed());
        assert_eq!(r.failure_count(Check::Oracle), 6);
    }

    #[test]
    fn empty_catalog_passes_with_warning() {
        let r = sweep(&Catalog::default(), &Check::ALL);
        assert!(r.passed());
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn check_names_roundtrip() {
        for c in Check::ALL {
            assert_eq!(Check::from_name(c.name()), Some(c));
        }
    }
}
