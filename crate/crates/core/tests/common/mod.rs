//! Shared builders and independently coded classical oracles.
//!
//! The oracle constructions below work over plain rational matrices and are
//! deliberately written from scratch — recursive subset enumeration and a
//! Leibniz permutation-expansion determinant instead of the library's
//! iterative enumerators and memoized cofactor expansion — so agreement
//! between the two code paths is a meaningful check rather than a tautology.

#![allow(dead_code)]

use num_traits::{One, Zero};
use oikomplex_core::{
    AlgebraSignature, BasisOrderKey, FreeOIModule, ModuleElement, ModuleMorphism, OIMorphism,
    PolyMatrix, Polynomial, Rat, VariableId,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// small builders shared across the integration suites
// ---------------------------------------------------------------------------

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

pub fn sig1() -> AlgebraSignature {
    AlgebraSignature::new(vec![1])
}

/// The variable `x[factor; image]` of the given algebra at width `w`.
pub fn var(factor: usize, w: u32, image: &[u32]) -> Polynomial {
    let eps = OIMorphism::new(image.len() as u32, w, image.to_vec()).expect("valid morphism");
    Polynomial::variable(w, VariableId::new(factor, eps)).expect("valid variable")
}

/// Identity basis key `e[j; id]` at width `source` viewed inside width `w`.
fn gen_key(j: usize, source: u32, w: u32, image: &[u32]) -> BasisOrderKey {
    BasisOrderKey::new(j, OIMorphism::new(source, w, image.to_vec()).expect("valid morphism"))
}

/// `φ: F¹(−1) → A` over one width-1 factor, `e ↦ x₁`.
pub fn phi_x1() -> ModuleMorphism {
    let domain = FreeOIModule::from_pairs(sig1(), &[(1, 1)]);
    let codomain = FreeOIModule::from_pairs(sig1(), &[(0, 0)]);
    let image = ModuleElement::basis(1, gen_key(1, 0, 1, &[]), var(1, 1, &[1]));
    ModuleMorphism::new(domain, codomain, vec![image]).expect("valid morphism")
}

/// `φ: F²(−1) → A` over one width-1 factor, `e_{id₂} ↦ x₂`: the torsion
/// example whose Koszul complex is not a resolution.
pub fn phi_x2_width2() -> ModuleMorphism {
    let domain = FreeOIModule::from_pairs(sig1(), &[(2, 1)]);
    let codomain = FreeOIModule::from_pairs(sig1(), &[(0, 0)]);
    let image = ModuleElement::basis(2, gen_key(1, 0, 2, &[]), var(1, 2, &[2]));
    ModuleMorphism::new(domain, codomain, vec![image]).expect("valid morphism")
}

/// `φ: F¹(−1) → A³` over three width-1 factors: the generic 1×3-variable row,
/// whose width-`w` matrix is the generic 3×w matrix of the three factors.
pub fn phi_generic3() -> ModuleMorphism {
    let sig = AlgebraSignature::new(vec![1, 1, 1]);
    let domain = FreeOIModule::from_pairs(sig.clone(), &[(1, 1)]);
    let codomain = FreeOIModule::from_pairs(sig, &[(0, 0), (0, 0), (0, 0)]);
    let mut image = ModuleElement::zero(1);
    for m in 1..=3 {
        image.add_term(gen_key(m, 0, 1, &[]), var(m, 1, &[1]));
    }
    ModuleMorphism::new(domain, codomain, vec![image]).expect("valid morphism")
}

/// `φ: F²(−1) → A` over one width-2 factor, `e_{id₂} ↦ x_{id₂}`: the
/// degree-2 monomial map (non-noetherian coefficient algebra).
pub fn phi_monomial_d2() -> ModuleMorphism {
    let sig = AlgebraSignature::new(vec![2]);
    let domain = FreeOIModule::from_pairs(sig.clone(), &[(2, 1)]);
    let codomain = FreeOIModule::from_pairs(sig, &[(0, 0)]);
    let image = ModuleElement::basis(2, gen_key(1, 0, 2, &[]), var(1, 2, &[1, 2]));
    ModuleMorphism::new(domain, codomain, vec![image]).expect("valid morphism")
}

/// A morphism between width-0-generated modules whose width-`w` matrix is the
/// given constant rational matrix at every width.
pub fn phi_constant(matrix: &[Vec<Rat>]) -> ModuleMorphism {
    let r = matrix.len();
    let n = if r > 0 { matrix[0].len() } else { 0 };
    let sig = sig1();
    let domain = FreeOIModule::from_pairs(sig.clone(), &vec![(0u32, 0i64); n]);
    let codomain = FreeOIModule::from_pairs(sig, &vec![(0u32, 0i64); r]);
    let mut images = Vec::with_capacity(n);
    for j in 0..n {
        let mut el = ModuleElement::zero(0);
        for (t, row) in matrix.iter().enumerate() {
            if !row[j].is_zero() {
                el.add_term(gen_key(t + 1, 0, 0, &[]), Polynomial::constant(0, row[j].clone()));
            }
        }
        images.push(el);
    }
    ModuleMorphism::new(domain, codomain, images).expect("valid morphism")
}

/// Deterministic random rational matrix: entries `±num/den` with
/// `num ∈ 1..=9`, `den ∈ 1..=4`, reproducible from the seed.
pub fn random_rat_matrix(rows: usize, cols: usize, seed: u64) -> Vec<Vec<Rat>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    let num: i64 = rng.gen_range(1..=9);
                    let den: i64 = rng.gen_range(1..=4);
                    let sign: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
                    rat(sign * num, den)
                })
                .collect()
        })
        .collect()
}

/// Exact binomial coefficient.
pub fn choose(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for s in 0..k {
        acc = acc * (n - s) / (s + 1);
    }
    acc
}

// ---------------------------------------------------------------------------
// independent combinatorics (recursive, unlike the library's iterative
// successor enumeration)
// ---------------------------------------------------------------------------

/// All strictly increasing `k`-tuples from `0..n`, lexicographic.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let needed = k - cur.len();
        let mut v = start;
        while v + needed <= n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
            v += 1;
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All weakly increasing `q`-tuples from `0..r`, lexicographic.
pub fn msets(r: usize, q: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, r: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for v in start..r {
            cur.push(v);
            rec(v, r, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, r, q, &mut Vec::new(), &mut out);
    out
}

/// Determinant by the Leibniz permutation expansion with inversion-count
/// parity — no cofactor recursion, no elimination.
pub fn perm_det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    fn rec(m: &[Vec<Rat>], row: usize, used: &mut [bool], even: bool, acc: &Rat, total: &mut Rat) {
        let n = m.len();
        if row == n {
            if even {
                *total += acc;
            } else {
                *total -= acc;
            }
            return;
        }
        for c in 0..n {
            if used[c] || m[row][c].is_zero() {
                continue;
            }
            // inversions added by σ(row) = c: used columns with index > c
            let added = used[c + 1..].iter().filter(|&&u| u).count();
            used[c] = true;
            let next = acc * &m[row][c];
            rec(m, row + 1, used, even == (added % 2 == 0), &next, total);
            used[c] = false;
        }
    }
    let mut total = Rat::zero();
    rec(m, 0, &mut vec![false; n], true, &Rat::one(), &mut total);
    total
}

// ---------------------------------------------------------------------------
// classical Koszul oracle on an explicit sequence of polynomial values
// ---------------------------------------------------------------------------

/// Differentials `d_1, …, d_n` of the Koszul complex on the value sequence,
/// in the canonical lexicographic wedge bases: `d(f_K) = Σ_ℓ (−1)^ℓ
/// values[K[ℓ]] · f_{K∖K[ℓ]}` (0-based ℓ).
pub fn koszul_oracle(values: &[Polynomial]) -> Vec<Vec<Vec<Polynomial>>> {
    let n = values.len();
    let width = values.first().map(|p| p.width()).unwrap_or(0);
    let mut out = Vec::new();
    for d in 1..=n {
        let rows = combinations(n, d - 1);
        let cols = combinations(n, d);
        let mut mat = vec![vec![Polynomial::zero(width); cols.len()]; rows.len()];
        for (ci, tuple) in cols.iter().enumerate() {
            for (l, &k) in tuple.iter().enumerate() {
                let mut rest = tuple.clone();
                rest.remove(l);
                let ri = rows.iter().position(|t| *t == rest).expect("facet of a wedge tuple");
                let term = if l % 2 == 0 { values[k].clone() } else { -&values[k] };
                let updated = &mat[ri][ci] + &term;
                mat[ri][ci] = updated;
            }
        }
        out.push(mat);
    }
    out
}

// ---------------------------------------------------------------------------
// classical Buchsbaum–Eisenbud oracle over a constant rational matrix
// ---------------------------------------------------------------------------

/// The classical generalized Koszul complex of index `i` of an `r×n` rational
/// matrix, in the canonical bases (wedge tuples lex; symmetric multisets lex;
/// wedge index outer on the right tail, symmetric index outer on the left).
pub struct OracleComplex {
    pub ranks: Vec<usize>,
    /// `differentials[j]` maps slot `j+1` to slot `j`.
    pub differentials: Vec<Vec<Vec<Rat>>>,
}

pub fn be_oracle(m: &[Vec<Rat>], i: usize) -> OracleComplex {
    let r = m.len();
    assert!(r >= 1, "oracle needs at least one row");
    let n = m[0].len();

    struct Slot {
        wedges: Vec<Vec<usize>>,
        syms: Vec<Vec<usize>>,
        sym_outer: bool,
    }
    impl Slot {
        fn rank(&self) -> usize {
            self.wedges.len() * self.syms.len()
        }
        fn index(&self, wi: usize, si: usize) -> usize {
            if self.sym_outer {
                si * self.wedges.len() + wi
            } else {
                wi * self.syms.len() + si
            }
        }
        fn wedge_pos(&self, t: &[usize]) -> usize {
            self.wedges.iter().position(|x| x == t).expect("wedge tuple in slot")
        }
        fn sym_pos(&self, t: &[usize]) -> usize {
            self.syms.iter().position(|x| x == t).expect("sym tuple in slot")
        }
    }

    let mut slots: Vec<Slot> = Vec::new();
    let tail_top = i.min(n);
    for j in 0..=tail_top {
        slots.push(Slot { wedges: combinations(n, j), syms: msets(r, i - j), sym_outer: false });
    }
    let has_left = n >= r + i;
    if has_left {
        for p in 0..=n - r - i {
            slots.push(Slot {
                wedges: combinations(n, r + i + p),
                syms: msets(r, p),
                sym_outer: true,
            });
        }
    }

    let mut differentials: Vec<Vec<Vec<Rat>>> = Vec::new();

    // right tail: remove one wedge factor, multiply the matrix column into
    // the symmetric part
    for j in 1..=tail_top {
        let src = &slots[j];
        let dst = &slots[j - 1];
        let mut d = vec![vec![Rat::zero(); src.rank()]; dst.rank()];
        for (wi, wt) in src.wedges.iter().enumerate() {
            for (si, st) in src.syms.iter().enumerate() {
                let col = src.index(wi, si);
                for (l, &k) in wt.iter().enumerate() {
                    let mut rest = wt.clone();
                    rest.remove(l);
                    let wrow = dst.wedge_pos(&rest);
                    for (t, mrow) in m.iter().enumerate() {
                        if mrow[k].is_zero() {
                            continue;
                        }
                        let mut stt = st.clone();
                        stt.push(t);
                        stt.sort_unstable();
                        let row = dst.index(wrow, dst.sym_pos(&stt));
                        let signed = if l % 2 == 0 { mrow[k].clone() } else { -&mrow[k] };
                        d[row][col] += signed;
                    }
                }
            }
        }
        differentials.push(d);
    }

    if has_left {
        // splice: signed maximal minors over r-element position subsets
        let src = &slots[i + 1];
        let dst = &slots[i];
        let mut a = vec![vec![Rat::zero(); src.rank()]; dst.rank()];
        for (col, tuple) in src.wedges.iter().enumerate() {
            for subset in combinations(r + i, r) {
                let minor_cols: Vec<usize> = subset.iter().map(|&p| tuple[p]).collect();
                let complement: Vec<usize> = (0..tuple.len())
                    .filter(|p| !subset.contains(p))
                    .map(|p| tuple[p])
                    .collect();
                let sub: Vec<Vec<Rat>> = m
                    .iter()
                    .map(|mrow| minor_cols.iter().map(|&k| mrow[k].clone()).collect())
                    .collect();
                let inversions: usize = subset.iter().enumerate().map(|(t, &p)| p - t).sum();
                let minor = perm_det(&sub);
                let signed = if inversions % 2 == 0 { minor } else { -&minor };
                a[dst.wedge_pos(&complement)][col] += signed;
            }
        }
        differentials.push(a);

        // left part: lower one dual-generator exponent (with multiplicity)
        // and remove one wedge factor
        for p in 1..=n - r - i {
            let src = &slots[i + 1 + p];
            let dst = &slots[i + p];
            let mut d = vec![vec![Rat::zero(); src.rank()]; dst.rank()];
            for (wi, wt) in src.wedges.iter().enumerate() {
                for (si, st) in src.syms.iter().enumerate() {
                    let col = src.index(wi, si);
                    let mut seen: Vec<usize> = Vec::new();
                    for &t in st {
                        if seen.contains(&t) {
                            continue;
                        }
                        seen.push(t);
                        let mult = st.iter().filter(|&&g| g == t).count();
                        let mut su = st.clone();
                        let pos = su.iter().position(|&g| g == t).expect("t in its support");
                        su.remove(pos);
                        let srow = dst.sym_pos(&su);
                        for (l, &k) in wt.iter().enumerate() {
                            if m[t][k].is_zero() {
                                continue;
                            }
                            let mut rest = wt.clone();
                            rest.remove(l);
                            let row = dst.index(dst.wedge_pos(&rest), srow);
                            let scaled = &m[t][k] * &Rat::from_integer((mult as i64).into());
                            d[row][col] += if l % 2 == 0 { scaled } else { -&scaled };
                        }
                    }
                }
            }
            differentials.push(d);
        }
    }

    OracleComplex { ranks: slots.iter().map(Slot::rank).collect(), differentials }
}

// ---------------------------------------------------------------------------
// rational-matrix helpers for oracle-side checks
// ---------------------------------------------------------------------------

/// Entries of a constant polynomial matrix as plain rationals; panics if any
/// entry is non-constant.
pub fn constant_entries(m: &PolyMatrix) -> Vec<Vec<Rat>> {
    let mut out = vec![vec![Rat::zero(); m.ncols()]; m.nrows()];
    for (row, out_row) in out.iter_mut().enumerate() {
        for (col, slot) in out_row.iter_mut().enumerate() {
            let entry = m.get(row, col);
            let c = entry.constant_term();
            assert!(
                *entry == Polynomial::constant(m.width(), c.clone()),
                "matrix entry ({row},{col}) is not constant"
            );
            *slot = c;
        }
    }
    out
}

pub fn rat_mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner > 0 { b[0].len() } else { 0 };
    let mut out = vec![vec![Rat::zero(); cols]; rows];
    for (ri, out_row) in out.iter_mut().enumerate() {
        for (ci, slot) in out_row.iter_mut().enumerate() {
            let mut acc = Rat::zero();
            for (x, b_row) in b.iter().enumerate() {
                acc += &a[ri][x] * &b_row[ci];
            }
            *slot = acc;
        }
    }
    out
}

pub fn rat_mat_is_zero(m: &[Vec<Rat>]) -> bool {
    m.iter().all(|row| row.iter().all(Rat::is_zero))
}

/// True when a constant-entry width complex agrees with the classical oracle
/// slot-for-slot and matrix-for-matrix.
pub fn matches_oracle(lib: &oikomplex_core::WidthComplex, oracle: &OracleComplex) -> bool {
    if lib.modules.iter().map(|m| m.rank).collect::<Vec<_>>() != oracle.ranks {
        return false;
    }
    if lib.differentials.len() != oracle.differentials.len() {
        return false;
    }
    lib.differentials
        .iter()
        .zip(&oracle.differentials)
        .all(|(d, o)| constant_entries(d) == *o)
}
