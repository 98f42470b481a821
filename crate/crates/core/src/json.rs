//! Stable JSON schemas for every value that crosses the CLI boundary.
//!
//! Integers serialize as decimal strings so that convergent entries and
//! exact coordinates survive any JSON parser; rationals serialize as
//! `"p/q"` (or `"p"` when integral). Matrix inputs additionally accept
//! plain JSON integers for convenience.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

use crate::afstable::{Outcome, StableIsoVerdict, Witness};
use crate::bratteli::BratteliDiagram;
use crate::cfrac::{DigitVector, JpaExpansion, Termination};
use crate::error::{Error, Result};
use crate::exact::{parse::parse_rational, ExactReal, FieldContext, TrackedFloat};
use crate::matrix::IntMatrix;

pub fn bigint_to_string(x: &BigInt) -> String {
    x.to_string()
}

pub fn bigint_from_string(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
}

pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

// -- exact reals -----------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ExactRealDto {
    Rational {
        num: String,
        den: String,
    },
    NumberField {
        min_poly: Vec<String>,
        interval: IntervalDto,
        coords: Vec<String>,
    },
    Float {
        value: f64,
        err: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntervalDto {
    pub lo: String,
    pub hi: String,
}

impl From<&ExactReal> for ExactRealDto {
    fn from(x: &ExactReal) -> Self {
        match x {
            ExactReal::Rational(r) => ExactRealDto::Rational {
                num: r.numer().to_string(),
                den: r.denom().to_string(),
            },
            ExactReal::NumberField { ctx, coords } => {
                let (lo, hi) = ctx.interval();
                ExactRealDto::NumberField {
                    min_poly: ctx.min_poly().iter().map(bigint_to_string).collect(),
                    interval: IntervalDto {
                        lo: rational_to_string(&lo),
                        hi: rational_to_string(&hi),
                    },
                    coords: coords.iter().map(rational_to_string).collect(),
                }
            }
            ExactReal::Float(t) => ExactRealDto::Float {
                value: t.value,
                err: t.err,
            },
        }
    }
}

impl TryFrom<&ExactRealDto> for ExactReal {
    type Error = Error;

    fn try_from(dto: &ExactRealDto) -> Result<ExactReal> {
        match dto {
            ExactRealDto::Rational { num, den } => {
                let n = bigint_from_string(num)?;
                let d = bigint_from_string(den)?;
                if d == BigInt::from(0) {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(ExactReal::Rational(BigRational::new(n, d)))
            }
            ExactRealDto::NumberField {
                min_poly,
                interval,
                coords,
            } => {
                let mp = min_poly
                    .iter()
                    .map(|s| bigint_from_string(s))
                    .collect::<Result<Vec<_>>>()?;
                let lo = parse_rational(&interval.lo)?;
                let hi = parse_rational(&interval.hi)?;
                let ctx = FieldContext::new(mp, lo, hi)?;
                let c = coords
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>>>()?;
                ExactReal::in_field(ctx, c)
            }
            ExactRealDto::Float { value, err } => {
                Ok(ExactReal::Float(TrackedFloat::new(*value, *err)?))
            }
        }
    }
}

// -- digits ------------------------------------------------------------------

pub fn digits_to_json(digits: &[DigitVector]) -> Vec<Vec<String>> {
    digits
        .iter()
        .map(|d| d.entries().iter().map(bigint_to_string).collect())
        .collect()
}

pub fn digits_from_json(raw: &[Vec<String>]) -> Result<Vec<DigitVector>> {
    raw.iter()
        .map(|row| {
            let entries = row
                .iter()
                .map(|s| bigint_from_string(s))
                .collect::<Result<Vec<_>>>()?;
            DigitVector::new(entries)
        })
        .collect()
}

// -- expansions ----------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpansionDto {
    pub rank: usize,
    pub digits: Vec<Vec<String>>,
    pub states: Vec<Vec<ExactRealDto>>,
    pub termination: TerminationDto,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum TerminationDto {
    Running,
    RationalDependence,
    Truncated,
}

impl From<Termination> for TerminationDto {
    fn from(t: Termination) -> Self {
        match t {
            Termination::Running => TerminationDto::Running,
            Termination::RationalDependence => TerminationDto::RationalDependence,
            Termination::Truncated => TerminationDto::Truncated,
        }
    }
}

impl From<TerminationDto> for Termination {
    fn from(t: TerminationDto) -> Self {
        match t {
            TerminationDto::Running => Termination::Running,
            TerminationDto::RationalDependence => Termination::RationalDependence,
            TerminationDto::Truncated => Termination::Truncated,
        }
    }
}

impl From<&JpaExpansion> for ExpansionDto {
    fn from(exp: &JpaExpansion) -> Self {
        ExpansionDto {
            rank: exp.rank(),
            digits: digits_to_json(exp.digits()),
            states: exp
                .states()
                .iter()
                .map(|s| s.iter().map(ExactRealDto::from).collect())
                .collect(),
            termination: exp.termination().into(),
        }
    }
}

impl TryFrom<&ExpansionDto> for JpaExpansion {
    type Error = Error;

    fn try_from(dto: &ExpansionDto) -> Result<JpaExpansion> {
        let digits = digits_from_json(&dto.digits)?;
        let states = dto
            .states
            .iter()
            .map(|s| s.iter().map(ExactReal::try_from).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        JpaExpansion::from_parts(dto.rank, digits, states, dto.termination.into())
    }
}

// -- matrices and diagrams --------------------------------------------------------

/// Matrix entry accepted from input files: decimal string or JSON integer.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntDto {
    Text(String),
    Number(i64),
}

impl IntDto {
    pub fn to_bigint(&self) -> Result<BigInt> {
        match self {
            IntDto::Text(s) => bigint_from_string(s),
            IntDto::Number(n) => Ok(BigInt::from(*n)),
        }
    }
}

pub fn matrix_from_json(rows: &[Vec<IntDto>]) -> Result<IntMatrix> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(IntDto::to_bigint).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_rows(parsed)
}

pub fn matrix_to_json(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.n_rows())
        .map(|r| m.row(r).iter().map(bigint_to_string).collect())
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelDto {
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagramDto {
    pub rank: usize,
    pub levels: Vec<LevelDto>,
    /// Omitted for the all-ones fan-out of a freshly built toric diagram.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_fanout: Option<Vec<String>>,
}

impl From<&BratteliDiagram> for DiagramDto {
    fn from(d: &BratteliDiagram) -> Self {
        let all_ones = d.root_fanout().iter().all(One::is_one);
        DiagramDto {
            rank: d.rank(),
            levels: d
                .matrices()
                .iter()
                .map(|m| LevelDto {
                    matrix: matrix_to_json(m),
                })
                .collect(),
            root_fanout: if all_ones || d.is_root_only() {
                None
            } else {
                Some(d.root_fanout().iter().map(bigint_to_string).collect())
            },
        }
    }
}

impl TryFrom<&DiagramDto> for BratteliDiagram {
    type Error = Error;

    fn try_from(dto: &DiagramDto) -> Result<BratteliDiagram> {
        let matrices = dto
            .levels
            .iter()
            .map(|l| {
                let rows = l
                    .matrix
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|s| bigint_from_string(s))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                IntMatrix::from_rows(rows)
            })
            .collect::<Result<Vec<_>>>()?;
        let fanout = match &dto.root_fanout {
            Some(f) => f
                .iter()
                .map(|s| bigint_from_string(s))
                .collect::<Result<Vec<_>>>()?,
            None => vec![BigInt::one(); dto.rank],
        };
        BratteliDiagram::from_parts(dto.rank, fanout, matrices)
    }
}

// -- verdicts -------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessDto {
    TailOffsets { a: usize, b: usize },
    Module {
        matrix: Vec<Vec<String>>,
        scale: ExactRealDto,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictDto {
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separating_invariant: Option<String>,
}

impl From<&StableIsoVerdict> for VerdictDto {
    fn from(v: &StableIsoVerdict) -> Self {
        VerdictDto {
            outcome: v.outcome,
            witness: v.witness.as_ref().map(|w| match w {
                Witness::TailOffsets { a, b } => WitnessDto::TailOffsets { a: *a, b: *b },
                Witness::Module { matrix, scale } => WitnessDto::Module {
                    matrix: matrix_to_json(matrix),
                    scale: ExactRealDto::from(scale),
                },
            }),
            separating_invariant: v.separating.clone(),
        }
    }
}
