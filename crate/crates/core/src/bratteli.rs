//! Bratteli diagrams of toric AF-algebras: construction from a digit
//! sequence, level dimensions, telescoping, and the K0 dimension-group
//! state.
//!
//! The diagram has a root vertex fanning out with single edges to the n
//! vertices of level 1; between consecutive n-vertex levels the incidence
//! matrix M_k is the Jacobi-Perron matrix of digit k, with entry (r, c)
//! counting edges from vertex c at level k to vertex r at level k+1, so
//! that dimension vectors evolve as d^(k+1) = M_k d^(k). The n-th vertex
//! of each level emits edges of multiplicities b_1, ..., b_{n-1} plus the
//! single-edge chain.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cfrac::{jpa_expand, DigitVector, JpaExpansion, JpaMatrix};
use crate::error::{Error, Result};
use crate::exact::ExactReal;
use crate::lattice::ProjectivePseudoLattice;
use crate::matrix::IntMatrix;

/// A leveled multigraph with non-negative integer incidence matrices.
///
/// `depth` counts the incidence matrices between n-vertex levels, so a
/// diagram of depth k has k+1 such levels (plus the root); depth 0 is the
/// root alone. Telescoping can compose the root fan-out with incidence
/// matrices, so the fan-out is stored as a vector (all ones for a freshly
/// built toric diagram).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BratteliDiagram {
    rank: usize,
    root_fanout: Vec<BigInt>,
    matrices: Vec<IntMatrix>,
    root_only: bool,
}

impl BratteliDiagram {
    pub fn root_only(rank: usize) -> Self {
        BratteliDiagram {
            rank,
            root_fanout: Vec::new(),
            matrices: Vec::new(),
            root_only: true,
        }
    }

    pub fn from_parts(
        rank: usize,
        root_fanout: Vec<BigInt>,
        matrices: Vec<IntMatrix>,
    ) -> Result<Self> {
        if rank < 2 {
            return Err(Error::Domain("diagram rank must be >= 2".into()));
        }
        if root_fanout.len() != rank {
            return Err(Error::Domain("root fan-out length must equal rank".into()));
        }
        for m in &matrices {
            if m.n_rows() != rank || m.n_cols() != rank {
                return Err(Error::Domain("incidence matrix shape mismatch".into()));
            }
            for r in 0..rank {
                for c in 0..rank {
                    if m.get(r, c).sign() == num_bigint::Sign::Minus {
                        return Err(Error::Domain("negative edge multiplicity".into()));
                    }
                }
            }
            // no dead vertices: every column must be nonzero
            for c in 0..rank {
                if (0..rank).all(|r| m.get(r, c).is_zero()) {
                    return Err(Error::Domain(format!("dead vertex in column {c}")));
                }
            }
        }
        Ok(BratteliDiagram {
            rank,
            root_fanout,
            matrices,
            root_only: false,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_root_only(&self) -> bool {
        self.root_only
    }

    /// Number of n-vertex levels (0 for the root-only diagram).
    pub fn num_levels(&self) -> usize {
        if self.root_only {
            0
        } else {
            self.matrices.len() + 1
        }
    }

    /// Incidence matrices between consecutive n-vertex levels.
    pub fn matrices(&self) -> &[IntMatrix] {
        &self.matrices
    }

    pub fn root_fanout(&self) -> &[BigInt] {
        &self.root_fanout
    }

    /// Reads the digit sequence back from the incidence matrices; errors
    /// when a matrix is not of the toric block shape.
    pub fn digits(&self) -> Result<Vec<DigitVector>> {
        self.matrices
            .iter()
            .map(|m| Ok(JpaMatrix::from_matrix(m)?.digit().clone()))
            .collect()
    }

    /// DOT rendering with edge multiplicities as labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph bratteli {\n  rankdir=LR;\n  node [shape=circle, label=\"\", width=0.12];\n");
        out.push_str("  root;\n");
        if !self.root_only {
            for v in 0..self.rank {
                for _ in 0..1 {
                    let mult = &self.root_fanout[v];
                    if mult.is_zero() {
                        continue;
                    }
                    if mult.is_one() {
                        out.push_str(&format!("  root -> v1_{v};\n"));
                    } else {
                        out.push_str(&format!("  root -> v1_{v} [label=\"{mult}\"];\n"));
                    }
                }
            }
            for (k, m) in self.matrices.iter().enumerate() {
                let (src, dst) = (k + 1, k + 2);
                for c in 0..self.rank {
                    for r in 0..self.rank {
                        let mult = m.get(r, c);
                        if mult.is_zero() {
                            continue;
                        }
                        if mult.is_one() {
                            out.push_str(&format!("  v{src}_{c} -> v{dst}_{r};\n"));
                        } else {
                            out.push_str(&format!(
                                "  v{src}_{c} -> v{dst}_{r} [label=\"{mult}\"];\n"
                            ));
                        }
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the toric diagram of the first `depth` digits: root fan-out of
/// single edges, then M_k = the Jacobi-Perron matrix of digit k.
pub fn build_toric_af(digits: &[DigitVector], depth: usize) -> Result<BratteliDiagram> {
    if depth > digits.len() {
        return Err(Error::Domain(format!(
            "depth {depth} exceeds available digits {}",
            digits.len()
        )));
    }
    if digits.is_empty() && depth == 0 {
        return Ok(BratteliDiagram::root_only(2));
    }
    let rank = digits[0].rank();
    if digits.iter().any(|d| d.rank() != rank) {
        return Err(Error::Domain("inconsistent digit lengths".into()));
    }
    if depth == 0 {
        return Ok(BratteliDiagram::root_only(rank));
    }
    let matrices = digits[..depth]
        .iter()
        .map(|d| JpaMatrix::from_digit(d.clone()).matrix())
        .collect();
    BratteliDiagram::from_parts(rank, vec![BigInt::one(); rank], matrices)
}

/// Dimension vectors d^(1) = root fan-out, d^(k+1) = M_k d^(k). The
/// root-only diagram reports just the root dimension (1).
pub fn level_dimensions(diagram: &BratteliDiagram) -> Vec<Vec<BigInt>> {
    if diagram.is_root_only() {
        return vec![vec![BigInt::one()]];
    }
    let mut dims = Vec::with_capacity(diagram.num_levels());
    let mut d = diagram.root_fanout().to_vec();
    dims.push(d.clone());
    for m in diagram.matrices() {
        d = m.mul_vec(&d).expect("shape checked at construction");
        dims.push(d.clone());
    }
    dims
}

/// Telescopes the diagram to the surviving levels in `cuts` (1-based,
/// strictly increasing). The new incidence matrix between surviving
/// levels c and c' is the product M_{c'-1} ... M_c, and the levels before
/// the first cut fold into the root fan-out, so dimension vectors at
/// surviving levels are unchanged.
pub fn telescope(diagram: &BratteliDiagram, cuts: &[usize]) -> Result<BratteliDiagram> {
    let levels = diagram.num_levels();
    if cuts.is_empty() {
        return Err(Error::Domain("telescope needs at least one cut".into()));
    }
    if cuts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("cuts must be strictly increasing".into()));
    }
    if cuts[0] < 1 || *cuts.last().unwrap() > levels {
        return Err(Error::Domain(format!(
            "cuts must lie in 1..={levels}"
        )));
    }
    // fold levels before the first cut into the root fan-out
    let mut fanout = diagram.root_fanout().to_vec();
    for m in &diagram.matrices()[..cuts[0] - 1] {
        fanout = m.mul_vec(&fanout)?;
    }
    let mut matrices = Vec::with_capacity(cuts.len().saturating_sub(1));
    for w in cuts.windows(2) {
        let (from, to) = (w[0], w[1]);
        let mut product = IntMatrix::identity(diagram.rank());
        // descending order: d^(to) = M_{to-1} ... M_{from} d^(from)
        for k in (from..to).rev() {
            product = product.mul(&diagram.matrices()[k - 1])?;
        }
        matrices.push(product);
    }
    BratteliDiagram::from_parts(diagram.rank(), fanout, matrices)
}

/// Value of the K0 class x under the dimension-group state
/// x_1 + x_2 theta_1 + ... + x_n theta_{n-1}; its positivity defines the
/// order on Z + theta_1 Z + ... + theta_{n-1} Z.
pub fn k0_state(theta: &ProjectivePseudoLattice, x: &[BigInt]) -> Result<ExactReal> {
    if x.len() != theta.rank() {
        return Err(Error::RankMismatch(x.len(), theta.rank()));
    }
    let mut acc = ExactReal::from_bigint(x[0].clone());
    for (i, t) in theta.thetas().iter().enumerate() {
        acc = acc.try_add(&t.scale_int(&x[i + 1]))?;
    }
    Ok(acc)
}

/// A toric AF-algebra: the defining projective pseudo-lattice together
/// with the Jacobi-Perron expansion of (1, theta) and the diagram built
/// to the available depth.
#[derive(Debug, Clone)]
pub struct ToricAfAlgebra {
    theta: ProjectivePseudoLattice,
    expansion: JpaExpansion,
    diagram: BratteliDiagram,
}

impl ToricAfAlgebra {
    /// Expands (1, theta_1, ..., theta_{n-1}) for up to `steps` digits and
    /// materializes the diagram.
    pub fn from_theta(theta: ProjectivePseudoLattice, steps: usize) -> Result<Self> {
        let expansion = jpa_expand(&theta.vector(), steps)?;
        let diagram = build_toric_af(expansion.digits(), expansion.digits().len())?;
        Ok(ToricAfAlgebra {
            theta,
            expansion,
            diagram,
        })
    }

    pub fn theta(&self) -> &ProjectivePseudoLattice {
        &self.theta
    }

    pub fn expansion(&self) -> &JpaExpansion {
        &self.expansion
    }

    pub fn digits(&self) -> &[DigitVector] {
        self.expansion.digits()
    }

    pub fn diagram(&self) -> &BratteliDiagram {
        &self.diagram
    }

    pub fn rank(&self) -> usize {
        self.theta.rank()
    }
}
