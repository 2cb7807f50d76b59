//! Free OI-modules over a polynomial OI-algebra, their elements, and module
//! morphisms presented by generator images.
//!
//! A free module is a finite list of generators, each with a width `n_j` and an
//! internal degree `a_j` (the twist: a generator of degree `a` generates a copy
//! of the algebra shifted so the generator sits in degree `a`).  At width `w`
//! the module is free over the width-`w` ring on the basis
//! `{ e[j;π] : π ∈ Hom([n_j],[w]) }`, and a transition `ε` acts by
//! `Σ a_π,j · e[j;π] ↦ Σ ε_*(a_π,j) · e[j;ε∘π]`.
//!
//! A morphism is stored intensionally by the images of the generators; its
//! action at every width is forced by equivariance, so naturality holds by
//! construction.  [`ModuleMorphism::check_naturality`] re-verifies the defining
//! squares explicitly as an independent safeguard.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::OiError;
use crate::oi_algebra::AlgebraSignature;
use crate::oi_cat::{binomial, BasisOrderKey, OIMorphism};
use crate::polyring::{PolyMatrix, Polynomial};

/// One free generator: its width and internal degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub width: u32,
    pub degree: i64,
}

/// A finitely generated free OI-module over a fixed polynomial OI-algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeOIModule {
    algebra: AlgebraSignature,
    generators: Vec<Generator>,
}

/// The ordered basis of a free module at one width, with positional lookup.
#[derive(Clone, Debug)]
pub struct WidthBasis {
    pub width: u32,
    pub keys: Vec<BasisOrderKey>,
    pub degrees: Vec<i64>,
    position: BTreeMap<BasisOrderKey, usize>,
}

impl WidthBasis {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn position(&self, key: &BasisOrderKey) -> Option<usize> {
        self.position.get(key).copied()
    }

    /// Same basis keys in deliberately non-canonical (reversed) enumeration
    /// order. Defect-injection seam for testing order-sensitive consumers.
    #[doc(hidden)]
    pub fn reversed(mut self) -> WidthBasis {
        self.keys.reverse();
        self.degrees.reverse();
        self.position = self
            .keys
            .iter()
            .enumerate()
            .map(|(index, key)| (key.clone(), index))
            .collect();
        self
    }
}

impl FreeOIModule {
    pub fn new(algebra: AlgebraSignature, generators: Vec<Generator>) -> Self {
        FreeOIModule { algebra, generators }
    }

    /// Module with the given generator widths, all in degree 0.
    pub fn free(algebra: AlgebraSignature, widths: &[u32]) -> Self {
        let generators = widths.iter().map(|&width| Generator { width, degree: 0 }).collect();
        FreeOIModule { algebra, generators }
    }

    /// Module from `(width, degree)` pairs.
    pub fn from_pairs(algebra: AlgebraSignature, pairs: &[(u32, i64)]) -> Self {
        let generators = pairs.iter().map(|&(width, degree)| Generator { width, degree }).collect();
        FreeOIModule { algebra, generators }
    }

    pub fn algebra(&self) -> &AlgebraSignature {
        &self.algebra
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// True when every generator has width 0 (each contributes exactly one
    /// basis element at every width).
    pub fn is_width0_generated(&self) -> bool {
        self.generators.iter().all(|g| g.width == 0)
    }

    /// `Σ_j C(w, n_j)`.
    pub fn rank_at_width(&self, w: u32) -> u128 {
        self.generators.iter().map(|g| binomial(w, g.width)).sum()
    }

    /// The canonical ordered basis at width `w`: generator index ascending,
    /// image vectors lexicographically ascending within each generator.
    pub fn basis_at_width(&self, w: u32) -> Vec<BasisOrderKey> {
        let mut out = Vec::new();
        for (j, g) in self.generators.iter().enumerate() {
            for m in OIMorphism::enumerate_hom(g.width, w) {
                out.push(BasisOrderKey::new(j + 1, m));
            }
        }
        out
    }

    /// Basis with positional lookup and per-element internal degrees.
    pub fn width_basis(&self, w: u32) -> WidthBasis {
        let keys = self.basis_at_width(w);
        let degrees = keys.iter().map(|k| self.generators[k.generator - 1].degree).collect();
        let position = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        WidthBasis { width: w, keys, degrees, position }
    }

    /// Internal degree of a basis element (independent of the morphism part,
    /// since transitions are degree-preserving).
    pub fn degree_of_key(&self, key: &BasisOrderKey) -> Result<i64, OiError> {
        self.generators
            .get(key.generator.wrapping_sub(1))
            .map(|g| g.degree)
            .ok_or_else(|| OiError::InvalidReference(format!("no generator {} in module", key.generator)))
    }

    /// Checks that `key` names a basis element of this module at width `w`.
    pub fn validate_key(&self, key: &BasisOrderKey, w: u32) -> Result<(), OiError> {
        let g = self
            .generators
            .get(key.generator.wrapping_sub(1))
            .ok_or_else(|| OiError::InvalidReference(format!("no generator {} in module", key.generator)))?;
        if key.morphism.source() != g.width {
            return Err(OiError::InvalidReference(format!(
                "key {key} has source width {} but generator {} has width {}",
                key.morphism.source(),
                key.generator,
                g.width
            )));
        }
        if key.morphism.target() != w {
            return Err(OiError::WidthMismatch(format!(
                "key {key} targets width {} inside width-{w} component",
                key.morphism.target()
            )));
        }
        Ok(())
    }

    /// The distinguished generator `e[j;id]` as an element of width `n_j`.
    pub fn generator_element(&self, j: usize) -> Result<ModuleElement, OiError> {
        let g = self
            .generators
            .get(j.wrapping_sub(1))
            .ok_or_else(|| OiError::InvalidReference(format!("no generator {j} in module")))?;
        let key = BasisOrderKey::new(j, OIMorphism::identity(g.width));
        Ok(ModuleElement::basis(g.width, key, Polynomial::one(g.width)))
    }

    /// Concatenation of generator lists (requires equal algebras).
    pub fn direct_sum(&self, other: &FreeOIModule) -> Result<FreeOIModule, OiError> {
        if self.algebra != other.algebra {
            return Err(OiError::InvalidReference(
                "direct sum of modules over different algebras".into(),
            ));
        }
        let mut generators = self.generators.clone();
        generators.extend_from_slice(&other.generators);
        Ok(FreeOIModule { algebra: self.algebra.clone(), generators })
    }

    /// Validates an element: every key names a basis element at the element's
    /// width, every coefficient lives in this algebra at that width.
    pub fn validate_element(&self, el: &ModuleElement) -> Result<(), OiError> {
        for (key, poly) in el.coords() {
            self.validate_key(key, el.width())?;
            if poly.width() != el.width() {
                return Err(OiError::WidthMismatch(format!(
                    "coefficient of {key} has width {} in width-{} element",
                    poly.width(),
                    el.width()
                )));
            }
            self.algebra.validate_polynomial(poly)?;
        }
        Ok(())
    }
}

impl fmt::Display for FreeOIModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generators.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .generators
            .iter()
            .map(|g| {
                if g.degree == 0 {
                    format!("F<{}>", g.width)
                } else {
                    format!("F<{}>(-{})", g.width, g.degree)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// An element of a free module at one width: a finite sum
/// `Σ p_key · e[key]` with polynomial coefficients at that width.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleElement {
    width: u32,
    coords: BTreeMap<BasisOrderKey, Polynomial>,
}

impl ModuleElement {
    pub fn zero(width: u32) -> Self {
        ModuleElement { width, coords: BTreeMap::new() }
    }

    pub fn basis(width: u32, key: BasisOrderKey, coeff: Polynomial) -> Self {
        let mut coords = BTreeMap::new();
        if !coeff.is_zero() {
            coords.insert(key, coeff);
        }
        ModuleElement { width, coords }
    }

    pub fn from_coords(
        width: u32,
        coords: impl IntoIterator<Item = (BasisOrderKey, Polynomial)>,
    ) -> Self {
        let mut out = ModuleElement::zero(width);
        for (k, p) in coords {
            out.add_term(k, p);
        }
        out
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> impl Iterator<Item = (&BasisOrderKey, &Polynomial)> {
        self.coords.iter()
    }

    pub fn coefficient(&self, key: &BasisOrderKey) -> Polynomial {
        self.coords.get(key).cloned().unwrap_or_else(|| Polynomial::zero(self.width))
    }

    /// Adds `p · e[key]` in place.
    pub fn add_term(&mut self, key: BasisOrderKey, p: Polynomial) {
        assert_eq!(p.width(), self.width, "coefficient width must match element width");
        if p.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coords.entry(key) {
            Entry::Vacant(e) => {
                e.insert(p);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().try_add(&p).expect("widths already checked");
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &ModuleElement) -> Result<ModuleElement, OiError> {
        if self.width != other.width {
            return Err(OiError::WidthMismatch(format!(
                "adding elements of widths {} and {}",
                self.width, other.width
            )));
        }
        let mut out = self.clone();
        for (k, p) in &other.coords {
            out.add_term(k.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, p: &Polynomial) -> Result<ModuleElement, OiError> {
        if self.width != p.width() {
            return Err(OiError::WidthMismatch(format!(
                "scaling width-{} element by width-{} polynomial",
                self.width,
                p.width()
            )));
        }
        let mut out = ModuleElement::zero(self.width);
        for (k, q) in &self.coords {
            out.add_term(k.clone(), p.try_mul(q)?);
        }
        Ok(out)
    }

    pub fn neg(&self) -> ModuleElement {
        let coords = self.coords.iter().map(|(k, p)| (k.clone(), -p)).collect();
        ModuleElement { width: self.width, coords }
    }

    /// The defining action of a width transition:
    /// `Σ a_ν · e_ν ↦ Σ ε_*(a_ν) · e_{ε∘ν}`.
    pub fn push_forward(&self, eps: &OIMorphism) -> Result<ModuleElement, OiError> {
        if eps.source() != self.width {
            return Err(OiError::WidthMismatch(format!(
                "push-forward along {eps} applied to width-{} element",
                self.width
            )));
        }
        let mut out = ModuleElement::zero(eps.target());
        for (k, p) in &self.coords {
            out.add_term(k.push_forward(eps)?, p.push_forward(eps)?);
        }
        Ok(out)
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|(k, p)| {
                if p.num_terms() == 1 && p.constant_term() == crate::polyring::Rat::from_integer(1.into()) {
                    k.to_string()
                } else {
                    format!("({p})*{k}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// JSON wire form of one `coefficient · basis-key` pair.
#[derive(Serialize, Deserialize)]
struct KeyPolyDto {
    key: String,
    poly: String,
}

/// JSON wire form of a module morphism.
#[derive(Serialize, Deserialize)]
struct MorphismDto {
    algebra: AlgebraSignature,
    domain: Vec<(u32, i64)>,
    codomain: Vec<(u32, i64)>,
    images: Vec<Vec<KeyPolyDto>>,
}

/// A morphism of free OI-modules, presented by the images of the domain
/// generators.  The action at every width is induced by equivariance.
#[derive(Clone, Debug)]
pub struct ModuleMorphism {
    domain: FreeOIModule,
    codomain: FreeOIModule,
    images: Vec<ModuleElement>,
}

/// Outcome of an explicit naturality re-check; `failure` carries the first
/// broken square.
#[derive(Clone, Debug)]
pub struct NaturalityReport {
    pub pass: bool,
    pub squares_checked: usize,
    pub failure: Option<NaturalityWitness>,
}

/// A broken square: the transition, the domain basis key, and the difference
/// `φ(ε_*(e)) − ε_*(φ(e))`.
#[derive(Clone, Debug)]
pub struct NaturalityWitness {
    pub eps: OIMorphism,
    pub key: BasisOrderKey,
    pub difference: ModuleElement,
}

impl ModuleMorphism {
    /// Validates widths, membership, and matching algebras.
    pub fn new(
        domain: FreeOIModule,
        codomain: FreeOIModule,
        images: Vec<ModuleElement>,
    ) -> Result<Self, OiError> {
        if domain.algebra() != codomain.algebra() {
            return Err(OiError::InvalidReference(
                "domain and codomain live over different algebras".into(),
            ));
        }
        if images.len() != domain.num_generators() {
            return Err(OiError::InvalidReference(format!(
                "{} generator images supplied for {} generators",
                images.len(),
                domain.num_generators()
            )));
        }
        for (j, el) in images.iter().enumerate() {
            let expected = domain.generators()[j].width;
            if el.width() != expected {
                return Err(OiError::WidthMismatch(format!(
                    "image of generator {} has width {} but the generator has width {expected}",
                    j + 1,
                    el.width()
                )));
            }
            codomain.validate_element(el)?;
        }
        Ok(ModuleMorphism { domain, codomain, images })
    }

    pub fn domain(&self) -> &FreeOIModule {
        &self.domain
    }

    pub fn codomain(&self) -> &FreeOIModule {
        &self.codomain
    }

    /// Image of the `j`-th (1-based) generator.
    pub fn generator_image(&self, j: usize) -> Result<&ModuleElement, OiError> {
        self.images
            .get(j.wrapping_sub(1))
            .ok_or_else(|| OiError::InvalidReference(format!("no generator {j} in domain")))
    }

    /// Image of a single domain basis element `e[j;π]`, namely
    /// `π_*(φ(e_j))` at width `π.target()`.
    pub fn apply_key(&self, key: &BasisOrderKey, width: u32) -> Result<ModuleElement, OiError> {
        self.domain.validate_key(key, width)?;
        self.images[key.generator - 1].push_forward(&key.morphism)
    }

    /// Applies the morphism to an arbitrary element.
    pub fn apply(&self, el: &ModuleElement) -> Result<ModuleElement, OiError> {
        let mut out = ModuleElement::zero(el.width());
        for (key, coeff) in el.coords() {
            let image = self.apply_key(key, el.width())?;
            out = out.add(&image.scale(coeff)?)?;
        }
        Ok(out)
    }

    /// The matrix of the width-`w` component in the canonical bases. Rows
    /// index the codomain basis, columns the domain basis.
    pub fn matrix_at_width(&self, w: u32) -> Result<PolyMatrix, OiError> {
        let dom = self.domain.width_basis(w);
        let cod = self.codomain.width_basis(w);
        let mut m = PolyMatrix::zero(w, cod.len(), dom.len());
        for (c, key) in dom.keys.iter().enumerate() {
            let image = self.apply_key(key, w)?;
            for (k, p) in image.coords() {
                let r = cod.position(k).ok_or_else(|| {
                    OiError::InvalidReference(format!("image key {k} not in codomain basis"))
                })?;
                m.set(r, c, p.clone());
            }
        }
        Ok(m)
    }

    /// `None` when the morphism is graded of degree 0 (every coefficient of
    /// the image of a degree-`a` generator is homogeneous of degree
    /// `a − deg(target generator)`); otherwise a human-readable witness.
    pub fn graded_witness(&self) -> Option<String> {
        let grading = self.domain.algebra().grading();
        for (j, el) in self.images.iter().enumerate() {
            let a = self.domain.generators()[j].degree;
            for (key, p) in el.coords() {
                let b = self.codomain.generators()[key.generator - 1].degree;
                let want = a - b;
                if !p.is_homogeneous(&grading) || p.degree(&grading) != Some(want) {
                    return Some(format!(
                        "image of generator {} at {key} is not homogeneous of degree {want}: {p}",
                        j + 1
                    ));
                }
            }
        }
        None
    }

    /// Re-checks the naturality squares `φ(w′) ∘ ε_* = ε_* ∘ φ(w)` on every
    /// basis element, for every `ε: [w] → [w+1]` with `w < w_max`, plus the
    /// inclusion-type transitions skipping more than one slot would add
    /// nothing: they factor as composites of these.
    pub fn check_naturality(&self, w_max: u32) -> Result<NaturalityReport, OiError> {
        let mut squares = 0;
        for w in 0..w_max {
            let basis = self.domain.basis_at_width(w);
            for eps in OIMorphism::enumerate_hom(w, w + 1) {
                for key in &basis {
                    let el = ModuleElement::basis(w, key.clone(), Polynomial::one(w));
                    let lhs = self.apply(&el.push_forward(&eps)?)?;
                    let rhs = self.apply(&el)?.push_forward(&eps)?;
                    squares += 1;
                    if lhs != rhs {
                        return Ok(NaturalityReport {
                            pass: false,
                            squares_checked: squares,
                            failure: Some(NaturalityWitness {
                                eps,
                                key: key.clone(),
                                difference: lhs.add(&rhs.neg())?,
                            }),
                        });
                    }
                }
            }
        }
        Ok(NaturalityReport { pass: true, squares_checked: squares, failure: None })
    }

    /// Serializes to the JSON wire form.
    pub fn to_json(&self) -> String {
        let dto = MorphismDto {
            algebra: self.domain.algebra().clone(),
            domain: self.domain.generators().iter().map(|g| (g.width, g.degree)).collect(),
            codomain: self.codomain.generators().iter().map(|g| (g.width, g.degree)).collect(),
            images: self
                .images
                .iter()
                .map(|el| {
                    el.coords()
                        .map(|(k, p)| KeyPolyDto { key: k.to_string(), poly: p.to_string() })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dto).expect("morphism serialization cannot fail")
    }

    /// Parses the JSON wire form and validates the result.
    pub fn from_json(text: &str) -> Result<Self, OiError> {
        let dto: MorphismDto =
            serde_json::from_str(text).map_err(|e| OiError::parse(format!("morphism JSON: {e}")))?;
        let domain = FreeOIModule::from_pairs(dto.algebra.clone(), &dto.domain);
        let codomain = FreeOIModule::from_pairs(dto.algebra, &dto.codomain);
        let mut images = Vec::with_capacity(dto.images.len());
        for (j, terms) in dto.images.iter().enumerate() {
            let gw = domain
                .generators()
                .get(j)
                .ok_or_else(|| OiError::parse("more images than domain generators"))?
                .width;
            let mut el = ModuleElement::zero(gw);
            for t in terms {
                let key = BasisOrderKey::parse(&t.key, gw)?;
                let poly = Polynomial::parse(&t.poly, gw)?;
                el.add_term(key, poly);
            }
            images.push(el);
        }
        ModuleMorphism::new(domain, codomain, images)
    }
}
