//! The category of totally ordered finite sets and order-preserving injections.
//!
//! Objects are skeletal: the width `w` stands for `[w] = {1 < 2 < … < w}` (so
//! width 0 is the empty set).  A morphism `[n] → [w]` is stored as its image
//! vector, a strictly increasing list of `n` values in `1..=w`.  Everything
//! downstream — variables of the polynomial OI-algebra, basis elements of free
//! modules — is indexed by these morphisms, so their enumeration order fixes
//! every basis order in the crate.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::OiError;

/// An order-preserving injection `[source] → [target]`, stored by its image.
///
/// The image vector is strictly increasing and 1-based.  Morphisms compare by
/// `(source, target, image lex)`; for fixed source and target this is exactly
/// lexicographic order on image vectors, which is the order used everywhere a
/// basis is enumerated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OIMorphism {
    source: u32,
    target: u32,
    image: Vec<u32>,
}

impl OIMorphism {
    /// Builds a morphism after validating that `image` is strictly increasing,
    /// has length `source`, and lands in `1..=target`.
    pub fn new(source: u32, target: u32, image: Vec<u32>) -> Result<Self, OiError> {
        if image.len() != source as usize {
            return Err(OiError::InvalidMorphism(format!(
                "image vector has length {} but source width is {source}",
                image.len()
            )));
        }
        for (k, &v) in image.iter().enumerate() {
            if v < 1 || v > target {
                return Err(OiError::InvalidMorphism(format!(
                    "image value {v} escapes target width {target}"
                )));
            }
            if k > 0 && image[k - 1] >= v {
                return Err(OiError::InvalidMorphism(format!(
                    "image vector {image:?} is not strictly increasing"
                )));
            }
        }
        Ok(OIMorphism { source, target, image })
    }

    /// The identity on `[w]`.
    pub fn identity(w: u32) -> Self {
        OIMorphism { source: w, target: w, image: (1..=w).collect() }
    }

    pub fn source(&self) -> u32 {
        self.source
    }

    pub fn target(&self) -> u32 {
        self.target
    }

    /// The strictly increasing image vector (1-based values).
    pub fn image(&self) -> &[u32] {
        &self.image
    }

    /// Applies the morphism to `k ∈ 1..=source`.
    pub fn apply(&self, k: u32) -> Result<u32, OiError> {
        if k < 1 || k > self.source {
            return Err(OiError::InvalidReference(format!(
                "argument {k} outside source width {}",
                self.source
            )));
        }
        Ok(self.image[(k - 1) as usize])
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.image.iter().enumerate().all(|(k, &v)| v == k as u32 + 1)
    }

    /// Composition `self ∘ inner` (apply `inner` first).  Requires
    /// `inner.target == self.source`.
    pub fn compose(&self, inner: &OIMorphism) -> Result<OIMorphism, OiError> {
        if inner.target != self.source {
            return Err(OiError::WidthMismatch(format!(
                "cannot compose: inner target {} != outer source {}",
                inner.target, self.source
            )));
        }
        let image = inner.image.iter().map(|&v| self.image[(v - 1) as usize]).collect();
        Ok(OIMorphism { source: inner.source, target: self.target, image })
    }

    /// All morphisms `[n] → [w]` in lexicographic order on image vectors.
    /// There are `C(w, n)` of them (none when `n > w`).
    pub fn enumerate_hom(n: u32, w: u32) -> Vec<OIMorphism> {
        let mut out = Vec::new();
        if n > w {
            return out;
        }
        let mut current: Vec<u32> = (1..=n).collect();
        loop {
            out.push(OIMorphism { source: n, target: w, image: current.clone() });
            // advance to the next strictly increasing n-subset of 1..=w, lex order
            let n = n as usize;
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if current[k] < (w as usize - (n - 1 - k)) as u32 {
                    current[k] += 1;
                    for j in k + 1..n {
                        current[j] = current[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// The inclusion of an arbitrary subset of `1..=target` as an OI-morphism.
    /// `subset` may come in any order; duplicates are rejected.
    pub fn inclusion_onto(subset: &[u32], target: u32) -> Result<OIMorphism, OiError> {
        let mut image: Vec<u32> = subset.to_vec();
        image.sort_unstable();
        image.dedup();
        if image.len() != subset.len() {
            return Err(OiError::InvalidMorphism(format!(
                "subset {subset:?} contains duplicates"
            )));
        }
        OIMorphism::new(image.len() as u32, target, image)
    }

    /// Factors `self = eps ∘ result` when `im(self) ⊆ im(eps)`, i.e. compresses
    /// `self` through `eps`.  Returns `None` when the image is not contained.
    pub fn factor_through(&self, eps: &OIMorphism) -> Option<OIMorphism> {
        if eps.target != self.target {
            return None;
        }
        let mut image = Vec::with_capacity(self.image.len());
        for &v in &self.image {
            // position of v inside eps's image, 1-based
            match eps.image.binary_search(&v) {
                Ok(pos) => image.push(pos as u32 + 1),
                Err(_) => return None,
            }
        }
        Some(OIMorphism { source: self.source, target: eps.source, image })
    }

    /// Union of the images of several morphisms into a common target, as a
    /// sorted list of 1-based values.
    pub fn image_union(parts: &[&OIMorphism]) -> Vec<u32> {
        let mut u: Vec<u32> = parts.iter().flat_map(|m| m.image.iter().copied()).collect();
        u.sort_unstable();
        u.dedup();
        u
    }
}

impl fmt::Display for OIMorphism {
    /// Text form `n->w:[i1,...,in]`, e.g. `2->4:[1,3]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.image.iter().map(|v| v.to_string()).collect();
        write!(f, "{}->{}:[{}]", self.source, self.target, parts.join(","))
    }
}

impl FromStr for OIMorphism {
    type Err = OiError;

    fn from_str(s: &str) -> Result<Self, OiError> {
        let (src, rest) = s
            .split_once("->")
            .ok_or_else(|| OiError::parse(format!("morphism `{s}` missing `->`")))?;
        let (tgt, img) = rest
            .split_once(':')
            .ok_or_else(|| OiError::parse(format!("morphism `{s}` missing `:`")))?;
        let source: u32 = src.trim().parse().map_err(|_| OiError::parse(format!("bad source in `{s}`")))?;
        let target: u32 = tgt.trim().parse().map_err(|_| OiError::parse(format!("bad target in `{s}`")))?;
        let img = img.trim();
        let inner = img
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| OiError::parse(format!("morphism `{s}` image not bracketed")))?;
        let image = parse_u32_list(inner)?;
        OIMorphism::new(source, target, image)
    }
}

pub(crate) fn parse_u32_list(inner: &str) -> Result<Vec<u32>, OiError> {
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| OiError::parse(format!("bad integer `{t}`"))))
        .collect()
}

/// Index of a basis element of a free module: the pair of a 1-based generator
/// index and an OI-morphism out of that generator's width.
///
/// Keys order by generator index first, then lexicographically on the image
/// vector of the morphism.  This order is total for each width and is
/// preserved by post-composition with any width transition `ε` (relabeling by
/// `ε` never swaps two keys), which is what makes the width-wise bases of all
/// derived complexes consistent across transitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisOrderKey {
    pub generator: usize,
    pub morphism: OIMorphism,
}

impl BasisOrderKey {
    pub fn new(generator: usize, morphism: OIMorphism) -> Self {
        BasisOrderKey { generator, morphism }
    }

    /// Relabels the key along `eps` (post-composition on the morphism part).
    pub fn push_forward(&self, eps: &OIMorphism) -> Result<BasisOrderKey, OiError> {
        Ok(BasisOrderKey { generator: self.generator, morphism: eps.compose(&self.morphism)? })
    }
}

impl PartialOrd for BasisOrderKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BasisOrderKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.generator
            .cmp(&other.generator)
            .then_with(|| self.morphism.image.cmp(&other.morphism.image))
            // widths only differ across distinct ambient objects; keep total anyway
            .then_with(|| self.morphism.cmp(&other.morphism))
    }
}

impl fmt::Display for BasisOrderKey {
    /// Text form `e[k;(i1,...,in)]`, e.g. `e[2;(1,3)]`; width-0 generators
    /// print as `e[k;()]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.morphism.image.iter().map(|v| v.to_string()).collect();
        write!(f, "e[{};({})]", self.generator, parts.join(","))
    }
}

impl BasisOrderKey {
    /// Parses `e[k;(i1,...,in)]`.  The morphism's source width is the image
    /// length; its target width must be supplied by context.
    pub fn parse(s: &str, target: u32) -> Result<Self, OiError> {
        let inner = s
            .trim()
            .strip_prefix("e[")
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| OiError::parse(format!("basis key `{s}` not of form e[k;(…)]")))?;
        let (gen, img) = inner
            .split_once(';')
            .ok_or_else(|| OiError::parse(format!("basis key `{s}` missing `;`")))?;
        let generator: usize =
            gen.trim().parse().map_err(|_| OiError::parse(format!("bad generator index in `{s}`")))?;
        if generator == 0 {
            return Err(OiError::parse("generator indices are 1-based"));
        }
        let img = img
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| OiError::parse(format!("basis key `{s}` image not parenthesized")))?;
        let image = parse_u32_list(img)?;
        let source = image.len() as u32;
        Ok(BasisOrderKey { generator, morphism: OIMorphism::new(source, target, image)? })
    }
}

/// `C(w, n)` as u128; the widths handled here are small (≤ 12 at the API
/// boundary) but ranks of derived modules can be large, so avoid u32 overflow.
pub fn binomial(w: u32, n: u32) -> u128 {
    if n > w {
        return 0;
    }
    let n = n.min(w - n);
    let mut acc: u128 = 1;
    for k in 0..n {
        acc = acc * (w as u128 - k as u128) / (k as u128 + 1);
    }
    acc
}
