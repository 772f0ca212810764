//! Instanton knot homology predictions read off the Alexander polynomial.
//!
//! The Euler characteristic of the generalized eigenspace `KHI(K, j)` is
//! `-a_j`, where `Δ_K = Σ a_j t^j` is symmetric with Conway's
//! normalization. For a link with `r` components the Euler characteristic
//! `χ = Σ_j χ(KHI(K, j)) t^j` and its normalized form `χ̃ = q^{1-r} χ`
//! satisfy `χ̃ = -Δ`, with `q = t^{1/2} - t^{-1/2}`; this makes `χ` a
//! polynomial in integer powers of `t` for every `r`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::diagram::{Diagram, SkeinTriple};
use crate::poly::{bigint_to_json, LaurentPoly};
use crate::skein::SkeinResolver;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FloerError {
    #[error("expected a knot, got a {0}-component link")]
    NotAKnot(usize),
    #[error("malformed prediction JSON: {0}")]
    BadJson(String),
}

/// `χ̃ = -Δ`.
pub fn normalized_chi(delta: &LaurentPoly) -> LaurentPoly {
    -delta
}

/// Un-normalized `χ = q^{r-1} χ̃ = -q^{r-1} Δ` for an `r`-component link.
pub fn euler_characteristic(delta: &LaurentPoly, components: usize) -> LaurentPoly {
    let lift = LaurentPoly::q().pow(components.saturating_sub(1) as u32);
    -(&lift * delta)
}

/// `Σ |a_j|`, a lower bound for the rank of `KHI`.
pub fn rank_lower_bound(p: &LaurentPoly) -> BigInt {
    p.sum_abs_coeffs()
}

/// `|Δ(-1)|`, taking `t^{1/2} = i` when the exponents are half-integers.
pub fn determinant(delta: &LaurentPoly) -> BigInt {
    let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
    for (e, c) in delta.terms() {
        match e.rem_euclid(4) {
            0 => re += c,
            1 => im += c,
            2 => re -= c,
            _ => im -= c,
        }
    }
    // one part always vanishes: the exponents share a parity
    re.abs() + im.abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberedVerdict {
    NotFibered,
    ConsistentWithFibered,
    InconclusiveGenus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberedEvidence {
    pub verdict: FiberedVerdict,
    pub monic: bool,
    pub alexander_degree: u32,
    pub seifert_bound: u32,
    pub leading_coeff: BigInt,
}

impl FiberedEvidence {
    /// The genus lies in `[deg Δ, seifert bound]`. A fibered knot has a
    /// monic Δ whose degree is the genus, so a non-monic top coefficient
    /// rules fiberedness out whatever the genus is.
    pub fn from_bracket(delta: &LaurentPoly, seifert_bound: u32) -> Self {
        let alexander_degree = (delta.max_exp().unwrap_or(0) / 2) as u32;
        let leading_coeff = delta.leading_coeff().cloned().unwrap_or_default();
        let monic = leading_coeff.abs().is_one();
        let verdict = if !monic {
            FiberedVerdict::NotFibered
        } else if alexander_degree == seifert_bound {
            FiberedVerdict::ConsistentWithFibered
        } else {
            FiberedVerdict::InconclusiveGenus
        };
        Self { verdict, monic, alexander_degree, seifert_bound, leading_coeff }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict,
            "monic": self.monic,
            "alexander_degree": self.alexander_degree,
            "seifert_bound": self.seifert_bound,
            "leading_coeff": bigint_to_json(&self.leading_coeff),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, FloerError> {
        let bad = |f: &str| FloerError::BadJson(format!("field `{f}`"));
        Ok(Self {
            verdict: serde_json::from_value(v.get("verdict").cloned().ok_or_else(|| bad("verdict"))?)
                .map_err(|_| bad("verdict"))?,
            monic: v.get("monic").and_then(Value::as_bool).ok_or_else(|| bad("monic"))?,
            alexander_degree: get_u32(v, "alexander_degree").ok_or_else(|| bad("alexander_degree"))?,
            seifert_bound: get_u32(v, "seifert_bound").ok_or_else(|| bad("seifert_bound"))?,
            leading_coeff: v.get("leading_coeff").and_then(json_bigint).ok_or_else(|| bad("leading_coeff"))?,
        })
    }
}

/// Fibered verdict for a knot diagram.
pub fn fibered_check(d: &Diagram) -> Result<FiberedEvidence, FloerError> {
    fibered_check_with(d, &mut SkeinResolver::default())
}

pub fn fibered_check_with(d: &Diagram, resolver: &mut SkeinResolver) -> Result<FiberedEvidence, FloerError> {
    if !d.is_knot() {
        return Err(FloerError::NotAKnot(d.component_count()));
    }
    let delta = resolver.conway(d).conway_to_alexander().expect("z scale");
    let bound = d.seifert_genus_bound().expect("a knot diagram is connected");
    Ok(FiberedEvidence::from_bracket(&delta, bound))
}

/// Everything predicted about `KHI` from one diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KhiPrediction {
    pub components: usize,
    pub alexander: LaurentPoly,
    /// `j ↦ χ(KHI(K, j))`, the coefficients of `χ`.
    pub eigen_table: BTreeMap<i64, BigInt>,
    pub rank_lower_bound: BigInt,
    pub determinant: BigInt,
    /// `[deg Δ, seifert bound]`, knots only.
    pub genus_bracket: Option<(u32, u32)>,
    pub fibered: Option<FiberedEvidence>,
    pub normalized_chi: LaurentPoly,
}

impl KhiPrediction {
    pub fn is_link(&self) -> bool {
        self.components > 1
    }

    /// Builds the prediction from an already computed Δ of `d`.
    pub fn from_alexander(d: &Diagram, delta: LaurentPoly) -> Self {
        let components = d.component_count();
        let chi = euler_characteristic(&delta, components);
        let eigen_table = chi.terms().map(|(e, c)| (e / 2, c.clone())).collect();
        let fibered = d
            .is_knot()
            .then(|| FiberedEvidence::from_bracket(&delta, d.seifert_genus_bound().expect("connected")));
        let genus_bracket = fibered.as_ref().map(|f| (f.alexander_degree, f.seifert_bound));
        Self {
            components,
            rank_lower_bound: rank_lower_bound(&delta),
            determinant: determinant(&delta),
            normalized_chi: normalized_chi(&delta),
            alexander: delta,
            eigen_table,
            genus_bracket,
            fibered,
        }
    }

    /// `Σ_j χ_j t^j` as a polynomial.
    pub fn chi(&self) -> LaurentPoly {
        LaurentPoly::from_t_terms(self.eigen_table.iter().map(|(j, c)| (*j, c.clone())))
    }

    pub fn to_json(&self) -> Value {
        let table: serde_json::Map<String, Value> =
            self.eigen_table.iter().map(|(j, c)| (j.to_string(), bigint_to_json(c))).collect();
        json!({
            "components": self.components,
            "is_link": self.is_link(),
            "alexander": self.alexander.to_json(),
            "eigen_table": table,
            "rank_lower_bound": bigint_to_json(&self.rank_lower_bound),
            "determinant": bigint_to_json(&self.determinant),
            "genus_bracket": self.genus_bracket.map(|(a, b)| vec![a, b]),
            "fibered": self.fibered.as_ref().map(FiberedEvidence::to_json),
            "normalized_chi": self.normalized_chi.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, FloerError> {
        let bad = |f: &str| FloerError::BadJson(format!("field `{f}`"));
        let poly = |f: &str| v.get(f).and_then(LaurentPoly::from_json).ok_or_else(|| bad(f));
        let big = |f: &str| v.get(f).and_then(json_bigint).ok_or_else(|| bad(f));
        let eigen_table = v
            .get("eigen_table")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("eigen_table"))?
            .iter()
            .map(|(k, c)| Some((k.parse().ok()?, json_bigint(c)?)))
            .collect::<Option<BTreeMap<i64, BigInt>>>()
            .ok_or_else(|| bad("eigen_table"))?;
        let genus_bracket = match v.get("genus_bracket") {
            None | Some(Value::Null) => None,
            Some(b) => {
                let pair: Vec<u32> = serde_json::from_value(b.clone()).map_err(|_| bad("genus_bracket"))?;
                match pair[..] {
                    [lo, hi] => Some((lo, hi)),
                    _ => return Err(bad("genus_bracket")),
                }
            }
        };
        let fibered = match v.get("fibered") {
            None | Some(Value::Null) => None,
            Some(f) => Some(FiberedEvidence::from_json(f)?),
        };
        Ok(Self {
            components: v.get("components").and_then(Value::as_u64).ok_or_else(|| bad("components"))? as usize,
            alexander: poly("alexander")?,
            eigen_table,
            rank_lower_bound: big("rank_lower_bound")?,
            determinant: big("determinant")?,
            genus_bracket,
            fibered,
            normalized_chi: poly("normalized_chi")?,
        })
    }
}

pub fn khi_table(d: &Diagram) -> KhiPrediction {
    khi_table_with(d, &mut SkeinResolver::default())
}

pub fn khi_table_with(d: &Diagram, resolver: &mut SkeinResolver) -> KhiPrediction {
    let delta = resolver.conway(d).conway_to_alexander().expect("z scale");
    KhiPrediction::from_alexander(d, delta)
}

/// Which side of the exact triangle a crossing falls on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriangleCase {
    /// Self-crossing: `K₀` has one more component, `χ₊ - χ₋ + χ₀ = 0`.
    ExtraComponent,
    /// Crossing between two components: `K₀` has one fewer, `χ₊ - χ₋ - χ₀ r = 0`.
    FewerComponents,
}

#[derive(Clone, Debug)]
pub struct TriangleReport {
    pub site: usize,
    pub case: TriangleCase,
    pub chi_plus: LaurentPoly,
    pub chi_minus: LaurentPoly,
    pub chi_zero: LaurentPoly,
    /// Left side of the identity for this case; zero iff it holds.
    pub residual: LaurentPoly,
    pub passed: bool,
    /// The same identity with the `χ₀` term's sign reversed.
    pub flipped_residual: LaurentPoly,
}

impl TriangleReport {
    pub fn to_json(&self) -> Value {
        json!({
            "site": self.site,
            "case": self.case,
            "chi_plus": self.chi_plus.to_json(),
            "chi_minus": self.chi_minus.to_json(),
            "chi_zero": self.chi_zero.to_json(),
            "residual": self.residual.to_json(),
            "passed": self.passed,
            "flipped_residual": self.flipped_residual.to_json(),
        })
    }
}

pub fn triangle_check(t: &SkeinTriple) -> TriangleReport {
    triangle_check_with(t, &mut SkeinResolver::default())
}

pub fn triangle_check_with(t: &SkeinTriple, resolver: &mut SkeinResolver) -> TriangleReport {
    let [plus, minus, zero] =
        [&t.plus, &t.minus, &t.zero].map(|d| resolver.conway(d).conway_to_alexander().expect("z scale"));
    triangle_from_alexander(t, &plus, &minus, &zero)
}

/// Triangle identity from the Alexander polynomials of `K₊`, `K₋`, `K₀`.
pub fn triangle_from_alexander(
    t: &SkeinTriple,
    plus: &LaurentPoly,
    minus: &LaurentPoly,
    zero: &LaurentPoly,
) -> TriangleReport {
    let chi_plus = euler_characteristic(plus, t.plus.component_count());
    let chi_minus = euler_characteristic(minus, t.minus.component_count());
    let chi_zero = euler_characteristic(zero, t.zero.component_count());
    let (case, zero_term) = if t.zero.component_count() > t.plus.component_count() {
        (TriangleCase::ExtraComponent, chi_zero.clone())
    } else {
        (TriangleCase::FewerComponents, -(&chi_zero * &LaurentPoly::r()))
    };
    let difference = &chi_plus - &chi_minus;
    let residual = &difference + &zero_term;
    let flipped_residual = &difference - &zero_term;
    TriangleReport {
        site: t.site,
        case,
        passed: residual.is_zero(),
        chi_plus,
        chi_minus,
        chi_zero,
        residual,
        flipped_residual,
    }
}

fn get_u32(v: &Value, f: &str) -> Option<u32> {
    v.get(f)?.as_u64()?.try_into().ok()
}

fn json_bigint(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Scale;

    fn t(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_t_terms(terms.iter().copied())
    }

    fn table(entries: &[(i64, i64)]) -> BTreeMap<i64, BigInt> {
        entries.iter().map(|&(j, c)| (j, BigInt::from(c))).collect()
    }

    const TREFOIL: &str = "[[1,5,2,4],[3,1,4,6],[5,3,6,2]]";
    const FIGURE_EIGHT: &str = "[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]";

    #[test]
    fn unknot_prediction() {
        let p = khi_table(&Diagram::unknot());
        assert_eq!(p.eigen_table, table(&[(0, -1)]));
        assert_eq!(p.rank_lower_bound, BigInt::from(1));
        assert_eq!(p.normalized_chi, -LaurentPoly::one(Scale::HalfT));
        assert_eq!(p.genus_bracket, Some((0, 0)));
    }

    #[test]
    fn trefoil_prediction() {
        let p = khi_table(&Diagram::parse_pd(TREFOIL).unwrap());
        assert_eq!(p.eigen_table, table(&[(-1, -1), (0, 1), (1, -1)]));
        assert_eq!(p.rank_lower_bound, BigInt::from(3));
        assert_eq!(p.determinant, BigInt::from(3));
        assert_eq!(p.fibered.unwrap().verdict, FiberedVerdict::ConsistentWithFibered);
    }

    #[test]
    fn torus_knot_3_4() {
        let d = Diagram::parse_braid("1 2 1 2 1 2 1 2").unwrap();
        let p = khi_table(&d);
        assert_eq!(p.rank_lower_bound, BigInt::from(5));
        assert_eq!(p.eigen_table.keys().copied().collect::<Vec<_>>(), vec![-3, -2, 0, 2, 3]);
        assert_eq!(p.determinant, BigInt::from(3));
    }

    #[test]
    fn rank_bounds() {
        assert_eq!(rank_lower_bound(&t(&[(1, -1), (0, 3), (-1, -1)])), BigInt::from(5));
        assert_eq!(rank_lower_bound(&LaurentPoly::one(Scale::HalfT)), BigInt::one());
    }

    #[test]
    fn fibered_verdicts() {
        let f = fibered_check(&Diagram::parse_pd(FIGURE_EIGHT).unwrap()).unwrap();
        assert_eq!(f.verdict, FiberedVerdict::ConsistentWithFibered);
        assert_eq!(f.leading_coeff, BigInt::from(-1));
        // twist knot 5_2
        let d = Diagram::parse_pd("[[1,5,2,4],[3,9,4,8],[5,1,6,10],[7,3,8,2],[9,7,10,6]]").unwrap();
        assert_eq!(khi_table(&d).alexander, t(&[(1, 2), (0, -3), (-1, 2)]));
        let f = fibered_check(&d).unwrap();
        assert_eq!((f.verdict, f.alexander_degree, f.seifert_bound), (FiberedVerdict::NotFibered, 1, 1));
        assert_eq!(fibered_check(&Diagram::parse_braid("1 1").unwrap()), Err(FloerError::NotAKnot(2)));
    }

    #[test]
    fn open_bracket_is_inconclusive() {
        let e = FiberedEvidence::from_bracket(&LaurentPoly::one(Scale::HalfT), 2);
        assert_eq!(e.verdict, FiberedVerdict::InconclusiveGenus);
        let e = FiberedEvidence::from_bracket(&t(&[(1, 2), (0, -3), (-1, 2)]), 3);
        assert_eq!(e.verdict, FiberedVerdict::NotFibered);
    }

    #[test]
    fn link_tables_have_integer_exponents() {
        let h = Diagram::parse_braid("1 1").unwrap();
        let p = khi_table(&h);
        assert!(p.is_link());
        assert_eq!(p.alexander, LaurentPoly::q());
        // χ = -q Δ = -(t - 2 + t^{-1})
        assert_eq!(p.eigen_table, table(&[(-1, -1), (0, 2), (1, -1)]));
        assert_eq!(p.determinant, BigInt::from(2));
        assert_eq!(p.genus_bracket, None);
        assert_eq!(&LaurentPoly::q() * &p.normalized_chi, p.chi());
    }

    #[test]
    fn json_roundtrip() {
        for d in [Diagram::unknot(), Diagram::parse_pd(FIGURE_EIGHT).unwrap(), Diagram::parse_braid("1 1").unwrap()] {
            let p = khi_table(&d);
            assert_eq!(KhiPrediction::from_json(&p.to_json()).unwrap(), p);
        }
    }

    #[test]
    fn triangle_cases() {
        let tr = Diagram::parse_braid("1 1 1").unwrap();
        let rep = triangle_check(&SkeinTriple::at(&tr, 0).unwrap());
        assert_eq!(rep.case, TriangleCase::ExtraComponent);
        // the consistent form is χ₊ - χ₋ - χ₀ = 0
        assert!(rep.flipped_residual.is_zero());
        assert!(!rep.passed);

        let hopf = Diagram::parse_braid("1 1").unwrap();
        let rep = triangle_check(&SkeinTriple::at(&hopf, 0).unwrap());
        assert_eq!(rep.case, TriangleCase::FewerComponents);
        assert!(rep.flipped_residual.is_zero());
        assert!(!rep.passed);

        let kink = Diagram::parse_braid("1").unwrap();
        let rep = triangle_check(&SkeinTriple::at(&kink, 0).unwrap());
        assert!(rep.chi_zero.is_zero() && rep.passed);
    }
}
