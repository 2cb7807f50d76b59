//! Free decompositions of tensor, exterior, and symmetric powers of free
//! OI-modules.
//!
//! These powers are taken width-wise and are again free; the decomposition
//! algorithm produces, for each new free generator, a *witness*: an explicit
//! element in compressed form whose leaf morphisms jointly cover the ambient
//! width.  A width-`u` witness contributes one generator of width `u`, hence
//! `C(w,u)` basis elements at every width `w` (its relabelings), and distinct
//! witnesses stay distinct under every relabeling, which is exactly why the
//! count identity `rank(w) = Σ mult_u · C(w,u)` certifies the decomposition.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::OiError;
use crate::free_mod::{FreeOIModule, Generator};
use crate::oi_cat::{binomial, OIMorphism};

/// One isomorphism class of new generators: `multiplicity` copies of a free
/// rank-one piece of the given generator width and internal degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Summand {
    pub width: u32,
    pub degree: i64,
    pub multiplicity: u64,
}

/// A generator witness: an explicit compressed element of the power module.
///
/// Leaves are basis elements `e[j;μ]` of the original module; `Tensor`,
/// `Wedge`, `Sym` mirror the shape of the power being decomposed.  All leaf
/// morphisms of one witness share the witness's ambient width, and their
/// images jointly cover it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Witness {
    Basis { generator: usize, morphism: OIMorphism },
    Tensor(Box<Witness>, Box<Witness>),
    Wedge(Vec<Witness>),
    Sym(Vec<Witness>),
}

impl Witness {
    /// Ambient width.  The empty wedge/sym (the unit) has width 0.
    pub fn width(&self) -> u32 {
        match self {
            Witness::Basis { morphism, .. } => morphism.target(),
            Witness::Tensor(a, _) => a.width(),
            Witness::Wedge(parts) | Witness::Sym(parts) => {
                parts.first().map_or(0, |p| p.width())
            }
        }
    }

    /// Relabels every leaf along `eps`.
    pub fn push_forward(&self, eps: &OIMorphism) -> Result<Witness, OiError> {
        Ok(match self {
            Witness::Basis { generator, morphism } => {
                Witness::Basis { generator: *generator, morphism: eps.compose(morphism)? }
            }
            Witness::Tensor(a, b) => Witness::Tensor(
                Box::new(a.push_forward(eps)?),
                Box::new(b.push_forward(eps)?),
            ),
            Witness::Wedge(parts) => Witness::Wedge(
                parts.iter().map(|p| p.push_forward(eps)).collect::<Result<_, _>>()?,
            ),
            Witness::Sym(parts) => Witness::Sym(
                parts.iter().map(|p| p.push_forward(eps)).collect::<Result<_, _>>()?,
            ),
        })
    }

    /// All leaf morphisms, left to right.
    pub fn leaf_morphisms(&self) -> Vec<&OIMorphism> {
        match self {
            Witness::Basis { morphism, .. } => vec![morphism],
            Witness::Tensor(a, b) => {
                let mut v = a.leaf_morphisms();
                v.extend(b.leaf_morphisms());
                v
            }
            Witness::Wedge(parts) | Witness::Sym(parts) => {
                parts.iter().flat_map(|p| p.leaf_morphisms()).collect()
            }
        }
    }

    /// True when the leaf images jointly cover `1..=width`.
    pub fn covers_width(&self) -> bool {
        let w = self.width();
        let union = OIMorphism::image_union(&self.leaf_morphisms());
        union.len() as u32 == w && union.iter().enumerate().all(|(i, &v)| v == i as u32 + 1)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn show(w: &Witness) -> String {
            match w {
                Witness::Basis { generator, morphism } => {
                    let parts: Vec<String> =
                        morphism.image().iter().map(|v| v.to_string()).collect();
                    format!("e[{};({})]", generator, parts.join(","))
                }
                Witness::Tensor(a, b) => format!("({})⊗({})", show(a), show(b)),
                Witness::Wedge(parts) if parts.is_empty() => "1".into(),
                Witness::Wedge(parts) => {
                    parts.iter().map(show).collect::<Vec<_>>().join("∧")
                }
                Witness::Sym(parts) if parts.is_empty() => "1".into(),
                Witness::Sym(parts) => parts.iter().map(show).collect::<Vec<_>>().join("·"),
            }
        }
        write!(f, "{}", show(self))
    }
}

/// A witness together with the generator data it contributes.
#[derive(Clone, Debug)]
pub struct WitnessedGenerator {
    pub witness: Witness,
    pub width: u32,
    pub degree: i64,
}

/// The result of a decomposition: aggregated summands plus one witness per new
/// generator, in canonical order.
#[derive(Clone, Debug)]
pub struct FreeDecomposition {
    pub summands: Vec<Summand>,
    pub witnesses: Vec<WitnessedGenerator>,
}

impl FreeDecomposition {
    fn from_witnesses(witnesses: Vec<WitnessedGenerator>) -> Self {
        let mut counts: BTreeMap<(u32, i64), u64> = BTreeMap::new();
        for w in &witnesses {
            *counts.entry((w.width, w.degree)).or_insert(0) += 1;
        }
        let summands = counts
            .into_iter()
            .map(|((width, degree), multiplicity)| Summand { width, degree, multiplicity })
            .collect();
        FreeDecomposition { summands, witnesses }
    }

    /// Total number of new generators.
    pub fn total_generators(&self) -> u64 {
        self.summands.iter().map(|s| s.multiplicity).sum()
    }

    /// `Σ mult · C(w, width)`: the rank of the decomposed module at width `w`.
    pub fn rank_at_width(&self, w: u32) -> u128 {
        self.summands.iter().map(|s| s.multiplicity as u128 * binomial(w, s.width)).sum()
    }

    /// The free module presented by this decomposition (generators in witness
    /// order).
    pub fn to_module(&self, algebra: crate::oi_algebra::AlgebraSignature) -> FreeOIModule {
        let generators =
            self.witnesses.iter().map(|w| Generator { width: w.width, degree: w.degree }).collect();
        FreeOIModule::new(algebra, generators)
    }

    /// The right-hand side of the rank identity, e.g. `3*C(w,3) + 12*C(w,4)`.
    /// Multiplicities of equal widths are merged regardless of degree.
    pub fn rank_identity_rhs(&self) -> String {
        let mut by_width: BTreeMap<u32, u64> = BTreeMap::new();
        for s in &self.summands {
            *by_width.entry(s.width).or_insert(0) += s.multiplicity;
        }
        if by_width.is_empty() {
            return "0".into();
        }
        by_width
            .into_iter()
            .map(|(w, m)| if m == 1 { format!("C(w,{w})") } else { format!("{m}*C(w,{w})") })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// JSON wire form: `{"summands": [[width, degree, multiplicity], …],
/// "identity": "…"}`.
#[derive(Serialize, Deserialize)]
struct DecompositionDto {
    summands: Vec<(u32, i64, u64)>,
    identity: String,
}

impl FreeDecomposition {
    pub fn to_json(&self, lhs_text: &str) -> String {
        let dto = DecompositionDto {
            summands: self.summands.iter().map(|s| (s.width, s.degree, s.multiplicity)).collect(),
            identity: format!("{} = {}", lhs_text, self.rank_identity_rhs()),
        };
        serde_json::to_string_pretty(&dto).expect("decomposition serialization cannot fail")
    }
}

/// The identity decomposition of a free module: one `Basis` witness per
/// generator.
fn module_as_decomposition(m: &FreeOIModule) -> FreeDecomposition {
    let witnesses = m
        .generators()
        .iter()
        .enumerate()
        .map(|(j, g)| WitnessedGenerator {
            witness: Witness::Basis {
                generator: j + 1,
                morphism: OIMorphism::identity(g.width),
            },
            width: g.width,
            degree: g.degree,
        })
        .collect();
    FreeDecomposition::from_witnesses(witnesses)
}

/// All `(μ, ν)` with `μ: [u] → [w]`, `ν: [v] → [w]` whose images jointly cover
/// `[w]`, for each `w` from `max(u,v)` to `u+v`, paired with `w`.
fn covering_pairs(u: u32, v: u32) -> Vec<(u32, OIMorphism, OIMorphism)> {
    let mut out = Vec::new();
    for w in u.max(v)..=u + v {
        for mu in OIMorphism::enumerate_hom(u, w) {
            for nu in OIMorphism::enumerate_hom(v, w) {
                if OIMorphism::image_union(&[&mu, &nu]).len() as u32 == w {
                    out.push((w, mu.clone(), nu));
                }
            }
        }
    }
    out
}

/// Tensor product of two decompositions: every covering pair of relabelings of
/// two witnesses yields one new witness.
fn tensor_combine(
    a: &FreeDecomposition,
    b: &FreeDecomposition,
) -> Result<FreeDecomposition, OiError> {
    let mut witnesses = Vec::new();
    for wa in &a.witnesses {
        for wb in &b.witnesses {
            for (w, mu, nu) in covering_pairs(wa.width, wb.width) {
                let _ = w;
                witnesses.push(WitnessedGenerator {
                    witness: Witness::Tensor(
                        Box::new(wa.witness.push_forward(&mu)?),
                        Box::new(wb.witness.push_forward(&nu)?),
                    ),
                    width: mu.target(),
                    degree: wa.degree + wb.degree,
                });
            }
        }
    }
    Ok(FreeDecomposition::from_witnesses(witnesses))
}

/// Free decomposition of `left ⊗ right`.
///
/// New generators are the compressed pure tensors `e_μ ⊗ e_ν` whose images
/// jointly cover their width; the width runs from `max(n_j, n_k)` to
/// `n_j + n_k` over generator pairs `(j, k)`.
pub fn tensor_decompose(
    left: &FreeOIModule,
    right: &FreeOIModule,
) -> Result<FreeDecomposition, OiError> {
    if left.algebra() != right.algebra() {
        return Err(OiError::InvalidReference(
            "tensor factors live over different algebras".into(),
        ));
    }
    tensor_combine(&module_as_decomposition(left), &module_as_decomposition(right))
}

/// Strictly increasing `i`-tuples of indices into `0..len`, lex order.
fn increasing_tuples(len: usize, i: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if i > len {
        return out;
    }
    if i == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut cur: Vec<usize> = (0..i).collect();
    loop {
        out.push(cur.clone());
        let mut k = i;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            // max value at slot k is len - (i - k); strictly below it can advance
            if cur[k] < len - (i - k) {
                cur[k] += 1;
                for j in k + 1..i {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Weakly increasing `i`-tuples of indices into `0..len`, lex order.
fn weakly_increasing_tuples(len: usize, i: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if i == 0 {
        out.push(Vec::new());
        return out;
    }
    if len == 0 {
        return out;
    }
    let mut cur = vec![0usize; i];
    loop {
        out.push(cur.clone());
        let mut k = i;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] < len - 1 {
                cur[k] += 1;
                for j in k + 1..i {
                    cur[j] = cur[k];
                }
                break;
            }
        }
    }
}

/// Exterior power of a single rank-one free piece `F<d>(−a)`: witnesses are
/// the wedges `e_{ε_1} ∧ … ∧ e_{ε_i}` over strictly increasing tuples whose
/// images cover the width.
fn wedge_single(
    generator: usize,
    d: u32,
    a: i64,
    i: usize,
) -> FreeDecomposition {
    if i == 0 {
        return FreeDecomposition::from_witnesses(vec![WitnessedGenerator {
            witness: Witness::Wedge(Vec::new()),
            width: 0,
            degree: 0,
        }]);
    }
    let mut witnesses = Vec::new();
    for w in 0..=d * i as u32 {
        let hom = OIMorphism::enumerate_hom(d, w);
        for tuple in increasing_tuples(hom.len(), i) {
            let parts: Vec<&OIMorphism> = tuple.iter().map(|&t| &hom[t]).collect();
            if OIMorphism::image_union(&parts).len() as u32 != w {
                continue;
            }
            witnesses.push(WitnessedGenerator {
                witness: Witness::Wedge(
                    tuple
                        .iter()
                        .map(|&t| Witness::Basis { generator, morphism: hom[t].clone() })
                        .collect(),
                ),
                width: w,
                degree: a * i as i64,
            });
        }
    }
    FreeDecomposition::from_witnesses(witnesses)
}

/// Symmetric power of a single rank-one free piece: weakly increasing tuples.
fn sym_single(generator: usize, d: u32, a: i64, q: usize) -> FreeDecomposition {
    if q == 0 {
        return FreeDecomposition::from_witnesses(vec![WitnessedGenerator {
            witness: Witness::Sym(Vec::new()),
            width: 0,
            degree: 0,
        }]);
    }
    let mut witnesses = Vec::new();
    for w in 0..=d * q as u32 {
        let hom = OIMorphism::enumerate_hom(d, w);
        for tuple in weakly_increasing_tuples(hom.len(), q) {
            let parts: Vec<&OIMorphism> = tuple.iter().map(|&t| &hom[t]).collect();
            if OIMorphism::image_union(&parts).len() as u32 != w {
                continue;
            }
            witnesses.push(WitnessedGenerator {
                witness: Witness::Sym(
                    tuple
                        .iter()
                        .map(|&t| Witness::Basis { generator, morphism: hom[t].clone() })
                        .collect(),
                ),
                width: w,
                degree: a * q as i64,
            });
        }
    }
    FreeDecomposition::from_witnesses(witnesses)
}

/// Exterior power `Λ^i` of a free module.
///
/// For several generators the power distributes:
/// `Λ^i(F_1 ⊕ R) = ⊕_{j} Λ^j F_1 ⊗ Λ^{i−j} R`, and the tensor is combined by
/// covering pairs as in [`tensor_decompose`].
pub fn wedge_decompose(module: &FreeOIModule, i: usize) -> Result<FreeDecomposition, OiError> {
    wedge_decompose_offset(module, i, 1)
}

/// As [`wedge_decompose`] but with leaf generator indices shifted to refer to
/// the original module (used in the recursive split).
fn wedge_decompose_offset(
    module: &FreeOIModule,
    i: usize,
    first_index: usize,
) -> Result<FreeDecomposition, OiError> {
    let gens = module.generators();
    if i == 0 {
        return Ok(wedge_single(first_index, 0, 0, 0));
    }
    match gens.len() {
        0 => Ok(FreeDecomposition::from_witnesses(Vec::new())),
        1 => Ok(wedge_single(first_index, gens[0].width, gens[0].degree, i)),
        _ => {
            let rest_gens: Vec<Generator> = gens[1..].to_vec();
            let rest = FreeOIModule::new(module.algebra().clone(), rest_gens);
            let mut witnesses = Vec::new();
            for j in 0..=i {
                let left = wedge_single(first_index, gens[0].width, gens[0].degree, j);
                let right = wedge_decompose_offset(&rest, i - j, first_index + 1)?;
                let combined = tensor_combine(&left, &right)?;
                witnesses.extend(combined.witnesses);
            }
            Ok(FreeDecomposition::from_witnesses(witnesses))
        }
    }
}

/// Symmetric power `S_q` of a free module, by the analogous distribution
/// `S_q(F_1 ⊕ R) = ⊕_j S_j F_1 ⊗ S_{q−j} R`.
pub fn sym_decompose(module: &FreeOIModule, q: usize) -> Result<FreeDecomposition, OiError> {
    sym_decompose_offset(module, q, 1)
}

fn sym_decompose_offset(
    module: &FreeOIModule,
    q: usize,
    first_index: usize,
) -> Result<FreeDecomposition, OiError> {
    let gens = module.generators();
    if q == 0 {
        return Ok(sym_single(first_index, 0, 0, 0));
    }
    match gens.len() {
        0 => Ok(FreeDecomposition::from_witnesses(Vec::new())),
        1 => Ok(sym_single(first_index, gens[0].width, gens[0].degree, q)),
        _ => {
            let rest_gens: Vec<Generator> = gens[1..].to_vec();
            let rest = FreeOIModule::new(module.algebra().clone(), rest_gens);
            let mut witnesses = Vec::new();
            for j in 0..=q {
                let left = sym_single(first_index, gens[0].width, gens[0].degree, j);
                let right = sym_decompose_offset(&rest, q - j, first_index + 1)?;
                let combined = tensor_combine(&left, &right)?;
                witnesses.extend(combined.witnesses);
            }
            Ok(FreeDecomposition::from_witnesses(witnesses))
        }
    }
}

/// Degreewise dual of a width-0-generated free module: generator `j` of
/// degree `a_j` dualizes to generator `j` of degree `−a_j` (the pairing sends
/// `e_j ↦ e*_j` index-preservingly).  Errors when any generator has positive
/// width, where the width-wise dual is no longer free of this simple shape.
pub fn dual_width0(module: &FreeOIModule) -> Result<FreeOIModule, OiError> {
    if !module.is_width0_generated() {
        return Err(OiError::Unsupported(
            "dual is only taken for width-0-generated modules".into(),
        ));
    }
    let generators = module
        .generators()
        .iter()
        .map(|g| Generator { width: 0, degree: -g.degree })
        .collect();
    Ok(FreeOIModule::new(module.algebra().clone(), generators))
}

/// Outcome of checking the rank identity of a decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub max_width: u32,
    pub pass: bool,
    /// `(width, expected, decomposition)` at the first disagreement.
    pub first_failure: Option<(u32, u128, u128)>,
}

/// Confirms `expected_rank(w) = Σ mult · C(w, width)` for all `0 ≤ w ≤ max_width`.
pub fn certify_rank_identity(
    decomposition: &FreeDecomposition,
    expected_rank: &dyn Fn(u32) -> u128,
    lhs_text: &str,
    max_width: u32,
) -> IdentityReport {
    let identity = format!("{lhs_text} = {}", decomposition.rank_identity_rhs());
    for w in 0..=max_width {
        let lhs = expected_rank(w);
        let rhs = decomposition.rank_at_width(w);
        if lhs != rhs {
            return IdentityReport { identity, max_width, pass: false, first_failure: Some((w, lhs, rhs)) };
        }
    }
    IdentityReport { identity, max_width, pass: true, first_failure: None }
}
