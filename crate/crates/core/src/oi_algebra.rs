//! Signatures of polynomial OI-algebras.
//!
//! A signature is a finite list of factor widths `(d_1, …, d_c)`; the algebra it
//! describes assigns to width `w` the polynomial ring over ℚ on the variables
//! `x[i;π]` with `1 ≤ i ≤ c` and `π` an OI-morphism `[d_i] → [w]`.  A width
//! transition `ε` acts by relabeling `x[i;π] ↦ x[i;ε∘π]`.  Each factor carries
//! an integer variable degree (default 1) defining the grading.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::OiError;
use crate::oi_cat::{binomial, OIMorphism};
use crate::polyring::{Polynomial, VariableId};

/// The signature `(d_1, …, d_c)` of a polynomial OI-algebra, with a variable
/// degree per factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSignature {
    factor_widths: Vec<u32>,
    variable_degrees: Vec<i64>,
}

impl AlgebraSignature {
    /// Signature with all variable degrees 1.
    pub fn new(factor_widths: Vec<u32>) -> Self {
        let n = factor_widths.len();
        AlgebraSignature { factor_widths, variable_degrees: vec![1; n] }
    }

    pub fn with_degrees(factor_widths: Vec<u32>, variable_degrees: Vec<i64>) -> Result<Self, OiError> {
        if factor_widths.len() != variable_degrees.len() {
            return Err(OiError::InvalidReference(format!(
                "{} factor widths but {} variable degrees",
                factor_widths.len(),
                variable_degrees.len()
            )));
        }
        Ok(AlgebraSignature { factor_widths, variable_degrees })
    }

    pub fn num_factors(&self) -> usize {
        self.factor_widths.len()
    }

    pub fn factor_widths(&self) -> &[u32] {
        &self.factor_widths
    }

    /// Degree of any variable of the given 1-based factor.
    pub fn factor_degree(&self, factor: usize) -> Result<i64, OiError> {
        self.variable_degrees
            .get(factor.wrapping_sub(1))
            .copied()
            .ok_or_else(|| OiError::InvalidReference(format!("no factor {factor} in {self}")))
    }

    /// Checks that a variable belongs to this algebra at the given width.
    pub fn validate_variable(&self, v: &VariableId, width: u32) -> Result<(), OiError> {
        let d = *self
            .factor_widths
            .get(v.factor.wrapping_sub(1))
            .ok_or_else(|| OiError::InvalidReference(format!("variable {v} names no factor of {self}")))?;
        if v.morphism.source() != d {
            return Err(OiError::InvalidReference(format!(
                "variable {v} has source width {} but factor {} has width {d}",
                v.morphism.source(),
                v.factor
            )));
        }
        if v.morphism.target() != width {
            return Err(OiError::WidthMismatch(format!(
                "variable {v} targets width {} inside width-{width} ring",
                v.morphism.target()
            )));
        }
        Ok(())
    }

    /// Checks every variable of a polynomial against this algebra.
    pub fn validate_polynomial(&self, p: &Polynomial) -> Result<(), OiError> {
        for (m, _) in p.terms() {
            for (v, _) in m.pairs() {
                self.validate_variable(v, p.width())?;
            }
        }
        Ok(())
    }

    /// All variables of the width-`w` ring, factor index ascending and image
    /// vectors lexicographically ascending within each factor.
    pub fn variables_at_width(&self, w: u32) -> Vec<VariableId> {
        let mut out = Vec::new();
        for (i, &d) in self.factor_widths.iter().enumerate() {
            for m in OIMorphism::enumerate_hom(d, w) {
                out.push(VariableId::new(i + 1, m));
            }
        }
        out
    }

    /// `Σ_i C(w, d_i)`, the number of variables at width `w`.
    pub fn variable_count_at_width(&self, w: u32) -> u128 {
        self.factor_widths.iter().map(|&d| binomial(w, d)).sum()
    }

    /// The grading function on variables induced by the factor degrees.
    /// Panics on variables that name no factor; validate first at boundaries.
    pub fn grading(&self) -> impl Fn(&VariableId) -> i64 + '_ {
        move |v: &VariableId| self.variable_degrees[v.factor - 1]
    }
}

impl fmt::Display for AlgebraSignature {
    /// Pretty form `X(d1)⊗X(d2)⊗…`; degrees other than 1 print as `X(d;g)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factor_widths.is_empty() {
            return write!(f, "Q");
        }
        let parts: Vec<String> = self
            .factor_widths
            .iter()
            .zip(&self.variable_degrees)
            .map(|(d, g)| if *g == 1 { format!("X({d})") } else { format!("X({d};{g})") })
            .collect();
        write!(f, "{}", parts.join("⊗"))
    }
}

impl AlgebraSignature {
    /// Canonical machine form: comma list of factor widths, each optionally
    /// `width:degree` (e.g. `1,1,1` or `2:1,3:2`).  This is the form taken on
    /// the command line and stored in JSON.
    pub fn to_flag_string(&self) -> String {
        self.factor_widths
            .iter()
            .zip(&self.variable_degrees)
            .map(|(d, g)| if *g == 1 { d.to_string() } else { format!("{d}:{g}") })
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl FromStr for AlgebraSignature {
    type Err = OiError;

    fn from_str(s: &str) -> Result<Self, OiError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(OiError::parse("empty algebra signature"));
        }
        let mut widths = Vec::new();
        let mut degrees = Vec::new();
        for item in s.split(',') {
            let item = item.trim();
            let (w, g) = match item.split_once(':') {
                Some((w, g)) => (
                    w.trim()
                        .parse::<u32>()
                        .map_err(|_| OiError::parse(format!("bad factor width `{w}`")))?,
                    g.trim()
                        .parse::<i64>()
                        .map_err(|_| OiError::parse(format!("bad variable degree `{g}`")))?,
                ),
                None => (
                    item.parse::<u32>()
                        .map_err(|_| OiError::parse(format!("bad factor width `{item}`")))?,
                    1,
                ),
            };
            widths.push(w);
            degrees.push(g);
        }
        AlgebraSignature::with_degrees(widths, degrees)
    }
}

impl Serialize for AlgebraSignature {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_flag_string())
    }
}

impl<'de> Deserialize<'de> for AlgebraSignature {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e: OiError| D::Error::custom(e.to_string()))
    }
}
