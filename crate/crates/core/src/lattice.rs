//! Pseudo-lattices and projective pseudo-lattices, the unimodular
//! basis-change action, projectivization with its scale section, and exact
//! Z-module equality via Hermite normal form.
//!
//! A pseudo-lattice of rank n is represented by its positive real vector
//! (l_1, ..., l_n); a basis change A in GL_n(Z) acts by columns,
//! l'_j = sum_i a_ij l_i, and leaves the generated Z-module
//! Z l_1 + ... + Z l_n unchanged. Module equality is decided inside one
//! number field by clearing denominators of the power-basis coordinate
//! rows and comparing Hermite normal forms, the decidable fragment needed
//! here (equality of generic real Z-modules is undecidable).

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ExactReal, FieldContext};
use crate::matrix::IntMatrix;

/// A rank-n pseudo-lattice: strictly positive reals (l_1, ..., l_n),
/// optionally tagged with the genus that produced the rank (n = 6g - 6 for
/// g >= 2, n = 2 for g = 1).
#[derive(Debug, Clone)]
pub struct PseudoLattice {
    lambdas: Vec<ExactReal>,
    genus: Option<u32>,
}

impl PseudoLattice {
    pub fn new(lambdas: Vec<ExactReal>, genus: Option<u32>) -> Result<Self> {
        if lambdas.len() < 2 {
            return Err(Error::Domain("pseudo-lattice needs rank >= 2".into()));
        }
        for (i, l) in lambdas.iter().enumerate() {
            let positive = if l.is_exact() {
                l.sign_exact()? > 0
            } else {
                let t = l.to_tracked_f64()?;
                t.value - t.err > 0.0
            };
            if !positive {
                return Err(Error::Domain(format!(
                    "pseudo-lattice coordinate {} must be > 0",
                    i + 1
                )));
            }
        }
        if let Some(g) = genus {
            let expected = genus_rank(g)?;
            if lambdas.len() != expected {
                return Err(Error::Domain(format!(
                    "genus {g} requires rank {expected}, got {}",
                    lambdas.len()
                )));
            }
        }
        Ok(PseudoLattice { lambdas, genus })
    }

    pub fn rank(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[ExactReal] {
        &self.lambdas
    }

    pub fn genus(&self) -> Option<u32> {
        self.genus
    }

    /// Scales every coordinate by c > 0 (stays in the isomorphism class of
    /// the projectivization).
    pub fn scale(&self, c: &ExactReal) -> Result<PseudoLattice> {
        let lambdas = self
            .lambdas
            .iter()
            .map(|l| l.try_mul(c))
            .collect::<Result<Vec<_>>>()?;
        PseudoLattice::new(lambdas, self.genus)
    }
}

/// Rank n for genus g: 6g - 6 when g >= 2, and 2 when g = 1.
pub fn genus_rank(g: u32) -> Result<usize> {
    match g {
        0 => Err(Error::Domain("genus must be >= 1".into())),
        1 => Ok(2),
        g => Ok(6 * g as usize - 6),
    }
}

/// A projective pseudo-lattice: leading coordinate 1 held implicitly,
/// remaining coordinates theta_i > 0.
#[derive(Debug, Clone)]
pub struct ProjectivePseudoLattice {
    thetas: Vec<ExactReal>,
}

impl ProjectivePseudoLattice {
    pub fn new(thetas: Vec<ExactReal>) -> Result<Self> {
        if thetas.is_empty() {
            return Err(Error::Domain(
                "projective pseudo-lattice needs rank >= 2".into(),
            ));
        }
        for (i, t) in thetas.iter().enumerate() {
            let positive = if t.is_exact() {
                t.sign_exact()? > 0
            } else {
                let f = t.to_tracked_f64()?;
                f.value - f.err > 0.0
            };
            if !positive {
                return Err(Error::Domain(format!("theta_{} must be > 0", i + 1)));
            }
        }
        Ok(ProjectivePseudoLattice { thetas })
    }

    pub fn rank(&self) -> usize {
        self.thetas.len() + 1
    }

    pub fn thetas(&self) -> &[ExactReal] {
        &self.thetas
    }

    /// The full coordinate vector (1, theta_1, ..., theta_{n-1}).
    pub fn vector(&self) -> Vec<ExactReal> {
        let mut v = Vec::with_capacity(self.rank());
        v.push(ExactReal::one());
        v.extend(self.thetas.iter().cloned());
        v
    }

    pub fn eq_exact(&self, other: &ProjectivePseudoLattice) -> Result<bool> {
        if self.rank() != other.rank() {
            return Ok(false);
        }
        for (a, b) in self.thetas.iter().zip(&other.thetas) {
            if !a.eq_exact(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// An element of GL_n(Z): integer matrix with determinant +-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisChange {
    matrix: IntMatrix,
}

impl BasisChange {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Domain("basis change must be square".into()));
        }
        let det = matrix.det()?;
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(BasisChange { matrix })
    }

    pub fn identity(n: usize) -> Self {
        BasisChange {
            matrix: IntMatrix::identity(n),
        }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.n_rows()
    }

    /// Matrix product (composition is basis_change(pl, A * B) =
    /// basis_change(basis_change(pl, A), B) under the column action).
    pub fn compose(&self, other: &BasisChange) -> Result<BasisChange> {
        BasisChange::new(self.matrix.mul(&other.matrix)?)
    }
}

/// The integration-rule action: l'_j = sum_i a_ij l_i. Errors when the
/// image leaves the positive cone.
pub fn basis_change(pl: &PseudoLattice, a: &BasisChange) -> Result<PseudoLattice> {
    let n = pl.rank();
    if a.rank() != n {
        return Err(Error::RankMismatch(a.rank(), n));
    }
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = ExactReal::zero();
        for i in 0..n {
            acc = acc.try_add(&pl.lambdas()[i].scale_int(a.matrix().get(i, j)))?;
        }
        out.push(acc);
    }
    for (j, v) in out.iter().enumerate() {
        let positive = if v.is_exact() {
            v.sign_exact()? > 0
        } else {
            let t = v.to_tracked_f64()?;
            t.value - t.err > 0.0
        };
        if !positive {
            return Err(Error::LeftCone(j + 1));
        }
    }
    PseudoLattice::new(out, pl.genus())
}

/// Projectivization: (l_1, ..., l_n) -> ((l_2/l_1, ..., l_n/l_1), l_1).
/// The scale is the fiber coordinate of the trivial bundle; `lift`
/// inverts it exactly.
pub fn projectivize(pl: &PseudoLattice) -> Result<(ProjectivePseudoLattice, ExactReal)> {
    let scale = pl.lambdas()[0].clone();
    let thetas = pl.lambdas()[1..]
        .iter()
        .map(|l| l.try_div(&scale))
        .collect::<Result<Vec<_>>>()?;
    Ok((ProjectivePseudoLattice::new(thetas)?, scale))
}

/// Section of the bundle: (theta, c) -> (c, c*theta_1, ..., c*theta_{n-1}).
pub fn lift(ppl: &ProjectivePseudoLattice, scale: &ExactReal) -> Result<PseudoLattice> {
    let positive = if scale.is_exact() {
        scale.sign_exact()? > 0
    } else {
        let t = scale.to_tracked_f64()?;
        t.value - t.err > 0.0
    };
    if !positive {
        return Err(Error::Domain("lift scale must be > 0".into()));
    }
    let mut lambdas = Vec::with_capacity(ppl.rank());
    lambdas.push(scale.clone());
    for t in ppl.thetas() {
        lambdas.push(t.try_mul(scale)?);
    }
    PseudoLattice::new(lambdas, None)
}

/// The lambdas of a pseudo-lattice written as exact rational rows in the
/// power basis of their shared field, with a common cleared denominator.
#[derive(Debug, Clone)]
pub struct ModuleCoords {
    rows: Vec<Vec<BigRational>>,
    denominator: BigInt,
    integer_rows: IntMatrix,
}

impl ModuleCoords {
    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn integer_rows(&self) -> &IntMatrix {
        &self.integer_rows
    }
}

fn coordinate_rows(
    lambdas: &[ExactReal],
    ctx: Option<&Arc<FieldContext>>,
) -> Result<Vec<Vec<BigRational>>> {
    let dim = ctx.map_or(1, |c| c.degree());
    lambdas
        .iter()
        .map(|l| match l {
            ExactReal::Rational(r) => {
                let mut row = vec![BigRational::zero(); dim];
                row[0] = r.clone();
                Ok(row)
            }
            ExactReal::NumberField { ctx: lc, coords } => match ctx {
                Some(c) if Arc::ptr_eq(c, lc) || c.same_root(lc) => Ok(coords.clone()),
                _ => Err(Error::MixedContext(
                    "lattice entries live in incompatible fields".into(),
                )),
            },
            ExactReal::Float(_) => Err(Error::InexactState(
                "module coordinates require exact entries".into(),
            )),
        })
        .collect()
}

fn shared_context(lambdas: &[ExactReal]) -> Result<Option<Arc<FieldContext>>> {
    let mut found: Option<Arc<FieldContext>> = None;
    for l in lambdas {
        if let Some(c) = l.field_context() {
            match &found {
                None => found = Some(c.clone()),
                Some(f) => {
                    if !(Arc::ptr_eq(f, c) || f.same_root(c)) {
                        return Err(Error::MixedContext(
                            "lattice entries live in incompatible fields".into(),
                        ));
                    }
                }
            }
        }
    }
    Ok(found)
}

fn clear_denominators(rows: &[Vec<BigRational>]) -> (BigInt, IntMatrix) {
    let mut den = BigInt::one();
    for row in rows {
        for c in row {
            den = den.lcm(c.denom());
        }
    }
    let int_rows = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| c.numer() * (&den / c.denom()))
                .collect()
        })
        .collect();
    (den, IntMatrix::from_rows(int_rows).unwrap())
}

/// Exact rational coordinate rows of the lambdas; clearing denominators
/// yields the integer matrix used for HNF comparisons.
pub fn module_coords(pl: &PseudoLattice) -> Result<ModuleCoords> {
    let ctx = shared_context(pl.lambdas())?;
    let rows = coordinate_rows(pl.lambdas(), ctx.as_ref())?;
    let (denominator, integer_rows) = clear_denominators(&rows);
    Ok(ModuleCoords {
        rows,
        denominator,
        integer_rows,
    })
}

/// Row-style Hermite normal form over Z with column pivoting and full
/// reduction; zero rows are removed. Equal row lattices have identical
/// HNF matrices.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let mut rows = m.rows_vec();
    let cols = m.n_cols();
    let mut pivot_row = 0usize;
    for col in 0..cols {
        if pivot_row >= rows.len() {
            break;
        }
        // gcd-eliminate below: keep combining until one nonzero entry remains
        loop {
            let mut nonzero: Vec<usize> = (pivot_row..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .collect();
            if nonzero.len() <= 1 {
                break;
            }
            // pick the row with the smallest nonzero |entry| as the reducer
            nonzero.sort_by_key(|&r| rows[r][col].abs());
            let base = nonzero[0];
            for &r in &nonzero[1..] {
                let q = div_floor_big(&rows[r][col], &rows[base][col]);
                if !q.is_zero() {
                    for c in 0..cols {
                        let sub = &rows[base][c] * &q;
                        rows[r][c] -= sub;
                    }
                }
            }
        }
        let Some(src) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, src);
        if rows[pivot_row][col].is_negative() {
            for c in 0..cols {
                rows[pivot_row][c] = -rows[pivot_row][c].clone();
            }
        }
        // fully reduce the entries above the pivot into [0, pivot)
        let pivot_val = rows[pivot_row][col].clone();
        for r in 0..pivot_row {
            let q = div_floor_big(&rows[r][col], &pivot_val);
            if !q.is_zero() {
                for c in 0..cols {
                    let sub = &rows[pivot_row][c] * &q;
                    rows[r][c] -= sub;
                }
            }
        }
        pivot_row += 1;
    }
    let nonzero_rows: Vec<Vec<BigInt>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .collect();
    IntMatrix::from_rows(nonzero_rows).unwrap()
}

fn div_floor_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Exact equality of the generated Z-modules Z l_1 + ... + Z l_n as
/// subsets of R, decided by HNF over a common denominator.
pub fn module_equal(a: &PseudoLattice, b: &PseudoLattice) -> Result<bool> {
    let ctx_a = shared_context(a.lambdas())?;
    let ctx_b = shared_context(b.lambdas())?;
    let ctx = match (&ctx_a, &ctx_b) {
        (Some(ca), Some(cb)) => {
            if Arc::ptr_eq(ca, cb) || ca.same_root(cb) {
                Some(ca.clone())
            } else {
                return Err(Error::MixedContext(
                    "module comparison across incompatible fields".into(),
                ));
            }
        }
        (Some(c), None) | (None, Some(c)) => Some(c.clone()),
        (None, None) => None,
    };
    let rows_a = coordinate_rows(a.lambdas(), ctx.as_ref())?;
    let rows_b = coordinate_rows(b.lambdas(), ctx.as_ref())?;
    let (den_a, _) = clear_denominators(&rows_a);
    let (den_b, _) = clear_denominators(&rows_b);
    let den = den_a.lcm(&den_b);
    let scale_rows = |rows: &[Vec<BigRational>]| -> IntMatrix {
        let int_rows = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| {
                        let scaled = c * BigRational::from_integer(den.clone());
                        debug_assert!(scaled.is_integer());
                        scaled.to_integer()
                    })
                    .collect()
            })
            .collect();
        IntMatrix::from_rows(int_rows).unwrap()
    };
    Ok(hnf(&scale_rows(&rows_a)) == hnf(&scale_rows(&rows_b)))
}
