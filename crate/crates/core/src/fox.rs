//! Alexander polynomial from the Wirtinger presentation by Fox calculus.
//!
//! This is an independent route to `Δ` used to check the skein engine on
//! knots. The Alexander matrix is built from Fox derivatives of the
//! relators with every generator sent to `t`; a first minor is computed by
//! fraction-free elimination over `Z[t, t^{-1}]` and then normalized to be
//! symmetric with `Δ(1) = 1`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::diagram::{Arc, Diagram, Sign};
use crate::poly::{LaurentPoly, Scale};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoxError {
    #[error("the Fox oracle handles knots only, got {0} components")]
    NotAKnot(usize),
    #[error("diagram is split into {0} pieces")]
    Split(usize),
    #[error("Alexander minor vanished")]
    ZeroDeterminant,
    #[error("minor {0} cannot be normalized to a symmetric polynomial with value 1 at t = 1")]
    NotNormalizable(String),
    #[error("row/column index {0} out of range")]
    IndexOutOfRange(usize),
}

/// `x_out = x_over^{ε} x_in x_over^{-ε}` at one crossing, `ε` the sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WirtingerRelation {
    pub incoming: usize,
    pub outgoing: usize,
    pub over: usize,
    pub sign: Sign,
}

impl WirtingerRelation {
    /// Relator word `x_over^{ε} x_in x_over^{-ε} x_out^{-1}` as
    /// `(generator, ±1)` letters.
    pub fn relator(&self) -> [(usize, i32); 4] {
        let e = self.sign.value();
        [(self.over, e), (self.incoming, 1), (self.over, -e), (self.outgoing, -1)]
    }
}

/// One generator per Wirtinger arc (maximal overpass), one relation per
/// crossing, listed in crossing order.
#[derive(Clone, Debug)]
pub struct WirtingerPresentation {
    generator_count: usize,
    relations: Vec<WirtingerRelation>,
    generator_of_arc: HashMap<Arc, usize>,
}

impl WirtingerPresentation {
    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relations(&self) -> &[WirtingerRelation] {
        &self.relations
    }

    /// Generator carried by a PD arc.
    pub fn generator_of_arc(&self, arc: Arc) -> Option<usize> {
        self.generator_of_arc.get(&arc).copied()
    }
}

/// Wirtinger presentation of a connected diagram. Generators are numbered
/// along the traversal, so generator 0 contains the first basepoint.
pub fn wirtinger(d: &Diagram) -> Result<WirtingerPresentation, FoxError> {
    let pieces = d.split_components().len();
    if pieces > 1 {
        return Err(FoxError::Split(pieces));
    }
    let ends = d.ends();
    let mut generator_of_arc = HashMap::new();
    let mut generator_count = 0;
    for comp in d.components() {
        if comp.is_crossingless() {
            generator_count += 1;
            continue;
        }
        let arcs = comp.arcs();
        // start right after an undercrossing when there is one
        let offset = arcs
            .iter()
            .position(|&a| ends[a as usize].tail.1 == 2)
            .unwrap_or(0);
        let mut current = None;
        for k in 0..arcs.len() {
            let a = arcs[(offset + k) % arcs.len()];
            let starts_new = current.is_none() || ends[a as usize].tail.1 == 2;
            if starts_new {
                current = Some(generator_count);
                generator_count += 1;
            }
            generator_of_arc.insert(a, current.expect("set above"));
        }
    }
    // renumber so that generators appear in traversal order from the basepoints
    let mut order = HashMap::new();
    for comp in d.components() {
        for a in comp.arcs() {
            let g = generator_of_arc[a];
            let next = order.len();
            order.entry(g).or_insert(next);
        }
    }
    let mut next = order.len();
    for g in 0..generator_count {
        order.entry(g).or_insert_with(|| {
            next += 1;
            next - 1
        });
    }
    let generator_of_arc: HashMap<Arc, usize> = generator_of_arc.into_iter().map(|(a, g)| (a, order[&g])).collect();
    let relations = d
        .crossings()
        .iter()
        .map(|c| WirtingerRelation {
            incoming: generator_of_arc[&c.under_in()],
            outgoing: generator_of_arc[&c.under_out()],
            over: generator_of_arc[&c.over_in()],
            sign: c.sign(),
        })
        .collect();
    Ok(WirtingerPresentation { generator_count, relations, generator_of_arc })
}

/// Fox derivative `∂w/∂x_g` of a word, abelianized by `x_i ↦ t`.
pub fn fox_derivative(word: &[(usize, i32)], g: usize) -> LaurentPoly {
    let mut out = LaurentPoly::zero(Scale::HalfT);
    let mut prefix: i64 = 0;
    for &(h, e) in word {
        if h == g {
            out = if e > 0 {
                out + LaurentPoly::monomial(Scale::HalfT, 2 * prefix, 1)
            } else {
                out - LaurentPoly::monomial(Scale::HalfT, 2 * (prefix - 1), 1)
            };
        }
        prefix += e as i64;
    }
    out
}

/// Alexander matrix: rows are relations, columns generators.
pub fn alexander_matrix(p: &WirtingerPresentation) -> Vec<Vec<LaurentPoly>> {
    p.relations
        .iter()
        .map(|r| {
            let w = r.relator();
            (0..p.generator_count).map(|g| fox_derivative(&w, g)).collect()
        })
        .collect()
}

/// Determinant by Bareiss fraction-free elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<LaurentPoly>>) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one(Scale::HalfT);
    }
    let scale = m[0][0].scale();
    let mut negate = false;
    let mut prev = LaurentPoly::one(scale);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(i) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return LaurentPoly::zero(scale);
            };
            m.swap(k, i);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss quotients are exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Δ from the minor that deletes relation 0 and generator 0.
pub fn alexander_via_fox(d: &Diagram) -> Result<LaurentPoly, FoxError> {
    alexander_via_fox_minor(d, 0, 0)
}

/// Δ from the minor that deletes relation `row` and generator `col`.
pub fn alexander_via_fox_minor(d: &Diagram, row: usize, col: usize) -> Result<LaurentPoly, FoxError> {
    if !d.is_knot() {
        return Err(FoxError::NotAKnot(d.component_count()));
    }
    let p = wirtinger(d)?;
    if p.relations.is_empty() {
        return Ok(LaurentPoly::one(Scale::HalfT));
    }
    let n = p.generator_count;
    if row >= p.relations.len() || col >= n {
        return Err(FoxError::IndexOutOfRange(row.max(col)));
    }
    let minor: Vec<Vec<LaurentPoly>> = alexander_matrix(&p)
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| i != row)
        .map(|(_, r)| r.into_iter().enumerate().filter(|&(j, _)| j != col).map(|(_, e)| e).collect())
        .collect();
    normalize(bareiss_determinant(minor))
}

/// Multiplies by `±t^k` to make the polynomial symmetric with value 1 at 1.
pub fn normalize(p: LaurentPoly) -> Result<LaurentPoly, FoxError> {
    let (Some(lo), Some(hi)) = (p.min_exp(), p.max_exp()) else {
        return Err(FoxError::ZeroDeterminant);
    };
    if (lo + hi) % 2 != 0 {
        return Err(FoxError::NotNormalizable(p.to_string()));
    }
    let centered = p.shifted(-(lo + hi) / 2);
    let at_one: BigInt = centered.terms().map(|(_, c)| c.clone()).sum();
    let out = if at_one.is_one() {
        centered
    } else if (-at_one).is_one() {
        -centered
    } else {
        return Err(FoxError::NotNormalizable(p.to_string()));
    };
    if !out.is_symmetric() || !out.has_integer_t_exponents() {
        return Err(FoxError::NotNormalizable(p.to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> Diagram {
        Diagram::parse_pd("[[1,5,2,4],[3,1,4,6],[5,3,6,2]]").unwrap()
    }

    #[test]
    fn presentation_sizes() {
        let p = wirtinger(&trefoil()).unwrap();
        assert_eq!((p.generator_count(), p.relations().len()), (3, 3));
        for r in p.relations() {
            assert!(r.relator().iter().all(|(g, _)| *g < 3));
        }
        let u = wirtinger(&Diagram::unknot()).unwrap();
        assert_eq!((u.generator_count(), u.relations().len()), (1, 0));
        let h = wirtinger(&Diagram::parse_braid("1 1").unwrap()).unwrap();
        assert_eq!((h.generator_count(), h.relations().len()), (2, 2));
        assert!(matches!(wirtinger(&Diagram::unlink(2)), Err(FoxError::Split(2))));
    }

    #[test]
    fn fox_derivatives_of_a_relator() {
        // x_k x_i x_k^{-1} x_j^{-1} with (i, j, k) = (0, 1, 2)
        let w = [(2, 1), (0, 1), (2, -1), (1, -1)];
        assert_eq!(fox_derivative(&w, 0), LaurentPoly::from_t_terms([(1, 1)]));
        assert_eq!(fox_derivative(&w, 1), LaurentPoly::from_t_terms([(0, -1)]));
        assert_eq!(fox_derivative(&w, 2), LaurentPoly::from_t_terms([(0, 1), (1, -1)]));
    }

    #[test]
    fn known_polynomials() {
        assert_eq!(alexander_via_fox(&Diagram::unknot()).unwrap(), LaurentPoly::one(Scale::HalfT));
        assert_eq!(
            alexander_via_fox(&trefoil()).unwrap(),
            LaurentPoly::from_t_terms([(1, 1), (0, -1), (-1, 1)])
        );
        let f = Diagram::parse_pd("[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]").unwrap();
        assert_eq!(alexander_via_fox(&f).unwrap(), LaurentPoly::from_t_terms([(1, -1), (0, 3), (-1, -1)]));
    }

    #[test]
    fn every_minor_agrees() {
        let f = Diagram::parse_pd("[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]").unwrap();
        let reference = alexander_via_fox(&f).unwrap();
        for row in 0..4 {
            for col in 0..4 {
                assert_eq!(alexander_via_fox_minor(&f, row, col).unwrap(), reference);
            }
        }
    }

    #[test]
    fn links_are_rejected() {
        let h = Diagram::parse_braid("1 1").unwrap();
        assert_eq!(alexander_via_fox(&h), Err(FoxError::NotAKnot(2)));
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let p = |v: &[(i64, i64)]| LaurentPoly::from_t_terms(v.iter().copied());
        let m = vec![
            vec![p(&[(0, 0)]), p(&[(1, 1)]), p(&[(0, 2)])],
            vec![p(&[(1, 1), (0, -1)]), p(&[(0, 0)]), p(&[(-1, 3)])],
            vec![p(&[(0, 1)]), p(&[(2, -1)]), p(&[(1, 1), (0, 1)])],
        ];
        let cof = |a: &LaurentPoly, b: &LaurentPoly, c: &LaurentPoly, d: &LaurentPoly| &(a * d) - &(b * c);
        let expected = &(&(&m[0][0] * &cof(&m[1][1], &m[1][2], &m[2][1], &m[2][2]))
            - &(&m[0][1] * &cof(&m[1][0], &m[1][2], &m[2][0], &m[2][2])))
            + &(&m[0][2] * &cof(&m[1][0], &m[1][1], &m[2][0], &m[2][1]));
        assert_eq!(bareiss_determinant(m), expected);
    }
}
