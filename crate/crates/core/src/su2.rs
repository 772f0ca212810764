//! Numerical enumeration of `Rep(K, i)`, the representations of the knot
//! group in SU(2) that send a fixed meridian to `i`.
//!
//! A trace-zero unit quaternion is a point of S², and conjugating one by
//! another rotates its axis by π about the other's axis. A representation is
//! then a choice of axis per Wirtinger generator such that at every crossing
//! `p_out = 2 (p_over · p_in) p_over - p_in`, with generator 0 pinned to
//! `z = (0, 0, 1)`. The rotations about `z` act on the solutions; irreducible
//! representations form circles, which are counted after fixing the gauge.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::diagram::Diagram;
use crate::fox::{wirtinger, WirtingerRelation};
use crate::poly::{bigint_to_json, LaurentPoly};

type V3 = Vector3<f64>;

const Z: V3 = V3::new(0.0, 0.0, 1.0);

/// Arcs whose axis is this close to `±z` in the xy-plane do not fix the gauge.
const GAUGE_XY_MIN: f64 = 1e-3;
/// Distance from the plane through `z` tolerated in a binary dihedral solution.
const PLANE_TOL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("representation counts need a knot, got {0} components")]
    NotAKnot(usize),
    #[error("{count} crossings exceeds the cap of {cap}")]
    TooManyCrossings { count: usize, cap: usize },
}

/// Rotation of `p_in` by π about `p_over`.
pub fn crossing_relation(p_in: &V3, p_over: &V3) -> V3 {
    2.0 * p_over.dot(p_in) * p_over - p_in
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Fibonacci-sphere points available to each free axis.
    pub grid: usize,
    pub max_iter: usize,
    /// Bound on the largest relation defect of an accepted solution.
    pub tol: f64,
    pub cluster_radius: f64,
    /// Smallest singular value required for nondegeneracy.
    pub rank_threshold: f64,
    pub seed: u64,
    /// Number of multi-start runs.
    pub starts: usize,
    pub max_crossings: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grid: 24,
            max_iter: 50,
            tol: 1e-10,
            cluster_radius: 1e-6,
            rank_threshold: 1e-8,
            seed: 0x5eed,
            starts: 4000,
            max_crossings: 12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepClass {
    Reducible,
    BinaryDihedral,
    Other,
}

#[derive(Clone, Debug)]
pub struct RepSolution {
    /// Axis of each Wirtinger generator, in the aligned gauge.
    pub axes: Vec<[f64; 3]>,
    pub residual: f64,
    pub classification: RepClass,
    pub nondegenerate: bool,
    /// Smallest singular value of the Jacobian transverse to the orbit.
    pub min_singular_value: f64,
    /// Number of starts that converged to this orbit.
    pub hits: usize,
}

impl RepSolution {
    pub fn to_json(&self) -> Value {
        json!({
            "axes": self.axes,
            "residual": self.residual,
            "classification": self.classification,
            "nondegenerate": self.nondegenerate,
            "min_singular_value": self.min_singular_value,
            "hits": self.hits,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepCount {
    /// Nondegenerate irreducible orbits, `n(K)`.
    pub n_irreducible_orbits: usize,
    /// The binary dihedral ones among them, `n'(K)`.
    pub n_binary_dihedral: usize,
    /// `(|det K| - 1) / 2`.
    pub predicted_n_binary_dihedral: usize,
    /// `1 + 2 n(K)`.
    pub dim_bound: usize,
    pub n_reducible: usize,
    /// Irreducible orbits failing the rank test; reported, never counted.
    pub n_degenerate: usize,
    pub starts: usize,
    pub converged: usize,
    /// Binary dihedral count matches the prediction and the rank bound holds.
    pub complete: bool,
}

impl RepCount {
    pub fn to_json(&self) -> Value {
        json!({
            "n_irreducible_orbits": self.n_irreducible_orbits,
            "n_binary_dihedral": self.n_binary_dihedral,
            "predicted_n_binary_dihedral": self.predicted_n_binary_dihedral,
            "dim_bound": self.dim_bound,
            "n_reducible": self.n_reducible,
            "n_degenerate": self.n_degenerate,
            "starts": self.starts,
            "converged": self.converged,
            "complete": self.complete,
        })
    }
}

#[derive(Clone, Debug)]
pub struct RepEnumeration {
    pub solutions: Vec<RepSolution>,
    pub count: RepCount,
}

impl RepEnumeration {
    pub fn to_json(&self) -> Value {
        json!({
            "count": self.count.to_json(),
            "orbits": self.solutions.iter().map(RepSolution::to_json).collect::<Vec<_>>(),
        })
    }
}

/// The relation system of one knot diagram.
struct System {
    generators: usize,
    relations: Vec<WirtingerRelation>,
}

impl System {
    fn residual(&self, p: &[V3]) -> DVector<f64> {
        let mut r = DVector::zeros(3 * self.relations.len());
        for (k, rel) in self.relations.iter().enumerate() {
            let v = p[rel.outgoing] - crossing_relation(&p[rel.incoming], &p[rel.over]);
            r.fixed_rows_mut::<3>(3 * k).copy_from(&v);
        }
        r
    }

    /// Jacobian in the tangent charts `basis` of the free axes `1..n`.
    fn jacobian(&self, p: &[V3], basis: &[[V3; 2]]) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(3 * self.relations.len(), 2 * (self.generators - 1));
        for (k, rel) in self.relations.iter().enumerate() {
            let (pi, po) = (p[rel.incoming], p[rel.over]);
            let blocks = [
                (rel.outgoing, Matrix3::identity()),
                (rel.incoming, Matrix3::identity() - 2.0 * po * po.transpose()),
                (rel.over, -2.0 * (po.dot(&pi) * Matrix3::identity() + po * pi.transpose())),
            ];
            for (g, m) in blocks {
                if g == 0 {
                    continue;
                }
                for (s, e) in basis[g].iter().enumerate() {
                    let col = m * e;
                    for row in 0..3 {
                        j[(3 * k + row, 2 * (g - 1) + s)] += col[row];
                    }
                }
            }
        }
        j
    }
}

fn tangent_basis(p: &V3) -> [V3; 2] {
    let a = if p.x.abs() < 0.6 { V3::x() } else { V3::y() };
    let e1 = a.cross(p).normalize();
    [e1, p.cross(&e1)]
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn fibonacci_sphere(n: usize) -> Vec<V3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            V3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Damped Gauss–Newton on the product of spheres. Returns the final axes
/// when the largest defect falls below `tol`.
fn refine(sys: &System, mut p: Vec<V3>, cfg: &SolverConfig) -> Option<Vec<V3>> {
    let mut r = sys.residual(&p);
    let mut err = max_abs(&r);
    let mut lambda = 1e-3;
    for _ in 0..cfg.max_iter {
        if err < cfg.tol {
            return Some(p);
        }
        let basis: Vec<[V3; 2]> = p.iter().map(tangent_basis).collect();
        let j = sys.jacobian(&p, &basis);
        let jt = j.transpose();
        let jtj = &jt * &j;
        let g = &jt * &r;
        let mut accepted = false;
        for _ in 0..8 {
            let mut a = jtj.clone();
            for d in 0..a.nrows() {
                a[(d, d)] += lambda * (1.0 + jtj[(d, d)]);
            }
            let Some(step) = a.cholesky().map(|c| c.solve(&(-&g))) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<V3> = p
                .iter()
                .enumerate()
                .map(|(a, v)| {
                    if a == 0 {
                        Z
                    } else {
                        (v + step[2 * (a - 1)] * basis[a][0] + step[2 * (a - 1) + 1] * basis[a][1]).normalize()
                    }
                })
                .collect();
            let tr = sys.residual(&trial);
            if tr.norm() < r.norm() {
                p = trial;
                r = tr;
                err = max_abs(&r);
                lambda = (lambda / 10.0).max(1e-12);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    (err < cfg.tol).then_some(p)
}

/// Rotates about `z` so the first arc off the `z` axis has azimuth 0.
fn align_gauge(p: &mut [V3]) {
    let Some(v) = p.iter().find(|v| v.xy().norm() > GAUGE_XY_MIN) else {
        return;
    };
    let theta = -v.y.atan2(v.x);
    let (s, c) = theta.sin_cos();
    for v in p.iter_mut() {
        *v = V3::new(c * v.x - s * v.y, s * v.x + c * v.y, v.z);
    }
}

fn classify(p: &[V3]) -> RepClass {
    if p.iter().all(|v| v.xy().norm() < GAUGE_XY_MIN) {
        RepClass::Reducible
    } else if p.iter().all(|v| v.y.abs() < PLANE_TOL) {
        RepClass::BinaryDihedral
    } else {
        RepClass::Other
    }
}

/// Smallest singular value of the Jacobian on the complement of the orbit
/// direction `z × p`.
fn transverse_singular_value(sys: &System, p: &[V3]) -> f64 {
    let cols = 2 * (sys.generators - 1);
    if cols == 0 {
        return f64::INFINITY;
    }
    let basis: Vec<[V3; 2]> = p.iter().map(tangent_basis).collect();
    let j = sys.jacobian(p, &basis);
    let mut orbit = DVector::zeros(cols);
    for a in 1..sys.generators {
        let t = Z.cross(&p[a]);
        orbit[2 * (a - 1)] = basis[a][0].dot(&t);
        orbit[2 * (a - 1) + 1] = basis[a][1].dot(&t);
    }
    let restricted = if orbit.norm() > 1e-12 {
        let mut m = DMatrix::identity(cols, cols + 1);
        m.set_column(0, &(orbit.normalize()));
        for c in 1..=cols {
            m[(c - 1, c)] = 1.0;
        }
        let q = m.qr().q();
        &j * q.columns(1, cols - 1)
    } else {
        j
    };
    if restricted.ncols() == 0 {
        return f64::INFINITY;
    }
    restricted.singular_values().min()
}

fn close(a: &[V3], b: &[V3], radius: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() < radius)
}

/// Multi-start search for `Rep(K, i)`. The Alexander polynomial `delta`
/// supplies the determinant and `Σ |a_j|` for the completeness test.
pub fn enumerate_reps(d: &Diagram, delta: &LaurentPoly, cfg: &SolverConfig) -> Result<RepEnumeration, RepError> {
    if !d.is_knot() {
        return Err(RepError::NotAKnot(d.component_count()));
    }
    if d.crossing_count() > cfg.max_crossings {
        return Err(RepError::TooManyCrossings { count: d.crossing_count(), cap: cfg.max_crossings });
    }
    let pres = wirtinger(d).expect("knot diagrams are connected");
    let sys = System { generators: pres.generator_count(), relations: pres.relations().to_vec() };
    let free = sys.generators - 1;

    let starts: Vec<Vec<V3>> = if free == 0 {
        vec![vec![Z]]
    } else {
        let grid = fibonacci_sphere(cfg.grid.max(1));
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        (0..cfg.starts.max(1))
            .map(|_| std::iter::once(Z).chain((0..free).map(|_| grid[rng.gen_range(0..grid.len())])).collect())
            .collect()
    };
    let found: Vec<Vec<V3>> = starts.par_iter().filter_map(|s| refine(&sys, s.clone(), cfg)).collect();
    let converged = found.len();

    let mut orbits: Vec<(Vec<V3>, usize)> = Vec::new();
    for mut p in found {
        align_gauge(&mut p);
        match orbits.iter_mut().find(|(q, _)| close(q, &p, cfg.cluster_radius)) {
            Some((_, hits)) => *hits += 1,
            None => orbits.push((p, 1)),
        }
    }

    let solutions: Vec<RepSolution> = orbits
        .into_iter()
        .map(|(p, hits)| {
            let classification = classify(&p);
            let min_singular_value = transverse_singular_value(&sys, &p);
            RepSolution {
                residual: max_abs(&sys.residual(&p)),
                axes: p.iter().map(|v| [v.x, v.y, v.z]).collect(),
                classification,
                nondegenerate: min_singular_value > cfg.rank_threshold,
                min_singular_value,
                hits,
            }
        })
        .collect();

    let counted = |pred: &dyn Fn(&RepSolution) -> bool| solutions.iter().filter(|s| pred(s)).count();
    let n_irreducible_orbits = counted(&|s| s.classification != RepClass::Reducible && s.nondegenerate);
    let n_binary_dihedral = counted(&|s| s.classification == RepClass::BinaryDihedral && s.nondegenerate);
    let n_degenerate = counted(&|s| s.classification != RepClass::Reducible && !s.nondegenerate);
    let n_reducible = counted(&|s| s.classification == RepClass::Reducible);
    let det = crate::floer::determinant(delta);
    let predicted_n_binary_dihedral = ((det - BigInt::from(1)) / BigInt::from(2)).to_usize().unwrap_or(usize::MAX);
    let dim_bound = 1 + 2 * n_irreducible_orbits;
    let rank_ok = delta.sum_abs_coeffs() <= BigInt::from(dim_bound);
    let count = RepCount {
        n_irreducible_orbits,
        n_binary_dihedral,
        predicted_n_binary_dihedral,
        dim_bound,
        n_reducible,
        n_degenerate,
        starts: starts.len(),
        converged,
        complete: n_binary_dihedral == predicted_n_binary_dihedral && rank_ok,
    };
    Ok(RepEnumeration { solutions, count })
}

/// Comparison of the representation count with the Alexander data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorollaryReport {
    pub rank_lower_bound: BigInt,
    pub dim_bound: usize,
    /// `Σ |a_j| ≤ 1 + 2 n(K)`.
    pub bound_holds: bool,
    pub determinant: BigInt,
    /// `|det K| < Σ |a_j|`, which rules out an alternating knot here.
    pub criterion_fires: bool,
    /// A non-binary-dihedral or degenerate orbit was found.
    pub found_exotic_or_degenerate: bool,
    /// The count agrees with both corollaries.
    pub consistent: bool,
    /// Set when the enumeration was incomplete; the verdicts are then only advisory.
    pub advisory: bool,
}

impl CorollaryReport {
    pub fn to_json(&self) -> Value {
        json!({
            "rank_lower_bound": bigint_to_json(&self.rank_lower_bound),
            "dim_bound": self.dim_bound,
            "bound_holds": self.bound_holds,
            "determinant": bigint_to_json(&self.determinant),
            "criterion_fires": self.criterion_fires,
            "found_exotic_or_degenerate": self.found_exotic_or_degenerate,
            "consistent": self.consistent,
            "advisory": self.advisory,
        })
    }
}

pub fn check_counting_corollaries(rc: &RepCount, delta: &LaurentPoly) -> CorollaryReport {
    let rank_lower_bound = delta.sum_abs_coeffs();
    let determinant = crate::floer::determinant(delta).abs();
    let bound_holds = rank_lower_bound <= BigInt::from(rc.dim_bound);
    let criterion_fires = determinant < rank_lower_bound;
    let found_exotic_or_degenerate = rc.n_irreducible_orbits > rc.n_binary_dihedral || rc.n_degenerate > 0;
    CorollaryReport {
        consistent: bound_holds && (!criterion_fires || found_exotic_or_degenerate),
        rank_lower_bound,
        dim_bound: rc.dim_bound,
        bound_holds,
        determinant,
        criterion_fires,
        found_exotic_or_degenerate,
        advisory: !rc.complete,
    }
}
