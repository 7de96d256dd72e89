//! Bipartite pure states and the quantities derived from them.
//!
//! A [`BipartiteState`] stores its coefficient matrix sparsely. Entropies
//! never materialize the full `d_A × d_B` matrix: the nonzero pattern is split
//! into connected row/column components, each component becomes a small
//! dense block, and identical blocks are merged with a multiplicity. The
//! spectrum of the whole state is the union of block spectra, so states with
//! tens of thousands of repeated Schmidt terms stay cheap.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::qmath::{self, ComplexMatrix, Spectrum, HERMITIAN_TOL};
use crate::{Error, Result, C64};

/// Default tolerance on the trace overlaps used for orthogonality classes.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

/// Normalization slack accepted by operations that require unit states.
pub const NORM_TOL: f64 = 1e-8;

/// Singular values below this fraction of the largest are treated as zero
/// when extracting Schmidt vectors.
const SCHMIDT_RANK_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// Pure state on `C^{d_A} ⊗ C^{d_B}`, possibly unnormalized.
///
/// Entries are `(i, j, amplitude)` for `|i⟩_A|j⟩_B`, kept sorted and free of
/// duplicates and exact zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl BipartiteState {
    /// Builds a state from `(i, j, amplitude)` triples.
    pub fn from_entries(
        dim_a: usize,
        dim_b: usize,
        entries: impl IntoIterator<Item = (usize, usize, C64)>,
    ) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::Dim(format!("state dimensions {dim_a}x{dim_b} must be positive")));
        }
        let mut list = Vec::new();
        for (i, j, z) in entries {
            if i >= dim_a || j >= dim_b {
                return Err(Error::Index { i, j, dim_a, dim_b });
            }
            if !z.is_finite() {
                return Err(Error::Domain(format!("non-finite amplitude at ({i}, {j})")));
            }
            list.push((i, j, z));
        }
        list.sort_by_key(|&(i, j, _)| (i, j));
        if let Some(w) = list.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::Domain(format!("duplicate amplitude for ({}, {})", w[0].0, w[0].1)));
        }
        list.retain(|e| e.2 != C64::new(0.0, 0.0));
        Ok(Self { dim_a, dim_b, entries: list })
    }

    pub fn from_dense(coeffs: &ComplexMatrix) -> Self {
        let (rows, cols) = coeffs.shape();
        let entries = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, coeffs[(i, j)]))
            .filter(|e| e.2 != C64::new(0.0, 0.0))
            .collect();
        Self { dim_a: rows, dim_b: cols, entries }
    }

    /// Product basis state `|i⟩_A|j⟩_B`.
    pub fn basis(dim_a: usize, dim_b: usize, i: usize, j: usize) -> Result<Self> {
        Self::from_entries(dim_a, dim_b, [(i, j, C64::new(1.0, 0.0))])
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    /// Dense coefficient matrix. Allocates `d_A·d_B` entries.
    pub fn coeffs(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim_a, self.dim_b);
        for &(i, j, z) in &self.entries {
            m[(i, j)] = z;
        }
        m
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let entries =
            self.entries.iter().map(|&(i, j, z)| (i, j, z * factor)).filter(|e| e.2 != C64::new(0.0, 0.0)).collect();
        Self { dim_a: self.dim_a, dim_b: self.dim_b, entries }
    }

    /// Unit-norm copy together with the norm that was divided out.
    pub fn normalized(&self) -> Result<(Self, f64)> {
        let n2 = norm_squared(self);
        if !(n2 > 0.0) {
            return Err(Error::ZeroState { norm_sq: n2 });
        }
        let n = n2.sqrt();
        Ok((self.scaled(C64::new(1.0 / n, 0.0)), n))
    }

    /// Exchanges the roles of A and B (transposes the coefficient matrix).
    pub fn swap_sides(&self) -> Self {
        let mut entries: Vec<_> = self.entries.iter().map(|&(i, j, z)| (j, i, z)).collect();
        entries.sort_by_key(|&(i, j, _)| (i, j));
        Self { dim_a: self.dim_b, dim_b: self.dim_a, entries }
    }

    fn check_same_dims(&self, other: &Self) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimMismatch { left: self.dims(), right: other.dims() });
        }
        Ok(())
    }

    fn check_normalized(&self) -> Result<()> {
        let n2 = norm_squared(self);
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { what: "state norm squared", value: n2 });
        }
        Ok(())
    }
}

pub fn norm_squared(s: &BipartiteState) -> f64 {
    s.entries.iter().map(|e| e.2.norm_sqr()).sum()
}

/// `⟨s1|s2⟩ = Σ conj(s1_ij)·s2_ij`.
pub fn inner_product(s1: &BipartiteState, s2: &BipartiteState) -> Result<C64> {
    s1.check_same_dims(s2)?;
    let (mut x, mut y) = (0, 0);
    let mut acc = C64::new(0.0, 0.0);
    while x < s1.entries.len() && y < s2.entries.len() {
        let (i1, j1, a) = s1.entries[x];
        let (i2, j2, b) = s2.entries[y];
        match (i1, j1).cmp(&(i2, j2)) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                acc += a.conj() * b;
                x += 1;
                y += 1;
            }
        }
    }
    Ok(acc)
}

/// `α·s1 + β·s2`, unnormalized.
pub fn superpose(alpha: C64, s1: &BipartiteState, beta: C64, s2: &BipartiteState) -> Result<BipartiteState> {
    s1.check_same_dims(s2)?;
    let mut merged: Vec<(usize, usize, C64)> = Vec::with_capacity(s1.entries.len() + s2.entries.len());
    let (mut x, mut y) = (0, 0);
    while x < s1.entries.len() || y < s2.entries.len() {
        let left = s1.entries.get(x).copied();
        let right = s2.entries.get(y).copied();
        match (left, right) {
            (Some((i, j, a)), Some((k, l, b))) if (i, j) == (k, l) => {
                merged.push((i, j, alpha * a + beta * b));
                x += 1;
                y += 1;
            }
            (Some((i, j, a)), Some((k, l, _))) if (i, j) < (k, l) => {
                merged.push((i, j, alpha * a));
                x += 1;
            }
            (Some((i, j, a)), None) => {
                merged.push((i, j, alpha * a));
                x += 1;
            }
            (_, Some((k, l, b))) => {
                merged.push((k, l, beta * b));
                y += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    merged.retain(|e| e.2 != C64::new(0.0, 0.0));
    Ok(BipartiteState { dim_a: s1.dim_a, dim_b: s1.dim_b, entries: merged })
}

/// Partial trace of `|s⟩⟨s|`: side `A` gives `C·C†`, side `B` gives
/// `Cᵀ·conj(C)`. Dense, so only meant for moderate dimensions.
pub fn reduced_density(s: &BipartiteState, side: Side) -> ComplexMatrix {
    match side {
        Side::A => s.coeffs().gram_rows(),
        Side::B => s.coeffs().transpose().gram_rows(),
    }
}

/// Squared Schmidt coefficients of the normalized state, descending.
pub fn schmidt_spectrum(s: &BipartiteState) -> Result<Spectrum> {
    let blocks = JointBlocks::new(&[s])?;
    let pairs = blocks.combination_pairs(&[C64::new(1.0, 0.0)])?;
    let total: f64 = pairs.iter().map(|&(v, m)| v * m as f64).sum();
    if !(total > 0.0) {
        return Err(Error::ZeroState { norm_sq: total });
    }
    let mut values = Vec::new();
    for (v, m) in pairs {
        values.extend(std::iter::repeat(v / total).take(m as usize));
    }
    let mut spec = Spectrum::new(values);
    spec.trace = 1.0;
    Ok(spec)
}

/// Entropy of entanglement in ebits of `s/‖s‖`.
pub fn entanglement_entropy(s: &BipartiteState) -> Result<f64> {
    JointBlocks::new(&[s])?.combination_entropy(&[C64::new(1.0, 0.0)])
}

/// Schmidt data of a normalized state: `Σ √p_k |a_k⟩|b_k⟩`.
#[derive(Clone, Debug)]
pub struct SchmidtForm {
    /// Squared Schmidt coefficients `p_k`, descending.
    pub coefficients: Spectrum,
    /// Orthonormal A-side vectors as columns.
    pub a_vectors: ComplexMatrix,
    /// Orthonormal B-side vectors as columns.
    pub b_vectors: ComplexMatrix,
}

impl SchmidtForm {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Rebuilds the normalized state.
    pub fn reconstruct(&self) -> BipartiteState {
        let (da, db) = (self.a_vectors.rows(), self.b_vectors.rows());
        let mut m = ComplexMatrix::zeros(da, db);
        for (k, &p) in self.coefficients.values.iter().enumerate() {
            let w = p.sqrt();
            for i in 0..da {
                let a = self.a_vectors[(i, k)] * w;
                for j in 0..db {
                    m[(i, j)] += a * self.b_vectors[(j, k)];
                }
            }
        }
        BipartiteState::from_dense(&m)
    }
}

/// Dense Schmidt decomposition of the normalized state.
pub fn schmidt_decomposition(s: &BipartiteState) -> Result<SchmidtForm> {
    let (unit, _) = s.normalized()?;
    let svd = qmath::svd(&unit.coeffs(), SCHMIDT_RANK_TOL)?;
    let total: f64 = svd.sigma.iter().map(|x| x * x).sum();
    let values = svd.sigma.iter().map(|x| x * x / total).collect();
    // C = Σ σ u v† means |ψ⟩ = Σ σ |u⟩ ⊗ |conj v⟩.
    Ok(SchmidtForm { coefficients: Spectrum { values, trace: 1.0 }, a_vectors: svd.u, b_vectors: svd.v.conj() })
}

/// Orthogonality relations between two normalized states.
#[derive(Clone, Debug, Serialize)]
pub struct OrthogonalityClass {
    /// `⟨Ψ|Φ⟩`.
    pub overlap: C64,
    /// `Tr[Tr_A(|Ψ⟩⟨Ψ|)·Tr_A(|Φ⟩⟨Φ|)]`: B-side supports.
    pub trace_eq1: f64,
    /// `Tr[Tr_B(|Ψ⟩⟨Ψ|)·Tr_B(|Φ⟩⟨Φ|)]`: A-side supports.
    pub trace_eq2: f64,
    pub one_sided_eq1: bool,
    pub one_sided_eq2: bool,
    pub biorthogonal: bool,
}

impl OrthogonalityClass {
    pub fn one_sided(&self) -> bool {
        self.one_sided_eq1 || self.one_sided_eq2
    }
}

pub fn classify_orthogonality(s1: &BipartiteState, s2: &BipartiteState, tol: f64) -> Result<OrthogonalityClass> {
    s1.check_same_dims(s2)?;
    s1.check_normalized()?;
    s2.check_normalized()?;
    let blocks = JointBlocks::new(&[s1, s2])?;
    let trace_eq1 = blocks.reduced_overlap(Side::B);
    let trace_eq2 = blocks.reduced_overlap(Side::A);
    let one_sided_eq1 = trace_eq1 <= tol;
    let one_sided_eq2 = trace_eq2 <= tol;
    Ok(OrthogonalityClass {
        overlap: inner_product(s1, s2)?,
        trace_eq1,
        trace_eq2,
        one_sided_eq1,
        one_sided_eq2,
        biorthogonal: one_sided_eq1 && one_sided_eq2,
    })
}

/// Canonical form of a pair whose B-side supports are orthogonal.
///
/// In the canonical frame Ψ uses B-basis vectors `0..d1` and Φ uses
/// `d1..d1+d2`; `frame_b` maps that frame back to the original B space.
#[derive(Clone, Debug)]
pub struct CanonicalPair {
    pub psi: SchmidtForm,
    pub phi: SchmidtForm,
    /// `d_B × (d1 + d2)` isometry whose columns are the original B vectors.
    pub frame_b: ComplexMatrix,
}

impl CanonicalPair {
    pub fn d1(&self) -> usize {
        self.psi.rank()
    }

    pub fn d2(&self) -> usize {
        self.phi.rank()
    }

    /// Maps a canonical-frame form back to a state in the original space.
    pub fn embed(&self, form: &SchmidtForm) -> BipartiteState {
        let lifted = SchmidtForm {
            coefficients: form.coefficients.clone(),
            a_vectors: form.a_vectors.clone(),
            b_vectors: &self.frame_b * &form.b_vectors,
        };
        lifted.reconstruct()
    }
}

/// Local-unitary canonical form of a pair satisfying the B-side condition.
///
/// Pairs that are only orthogonal on the A side should be passed through
/// [`BipartiteState::swap_sides`] first.
pub fn lemma1_canonical_form(s1: &BipartiteState, s2: &BipartiteState) -> Result<CanonicalPair> {
    let class = classify_orthogonality(s1, s2, 1e-8)?;
    if !class.one_sided_eq1 {
        return Err(Error::NotOneSided { eq1: class.trace_eq1, eq2: class.trace_eq2 });
    }
    let f1 = schmidt_decomposition(s1)?;
    let f2 = schmidt_decomposition(s2)?;
    let (d1, d2) = (f1.rank(), f2.rank());
    let db = s1.dim_b();
    let mut frame_b = ComplexMatrix::zeros(db, d1 + d2);
    for j in 0..db {
        for k in 0..d1 {
            frame_b[(j, k)] = f1.b_vectors[(j, k)];
        }
        for k in 0..d2 {
            frame_b[(j, d1 + k)] = f2.b_vectors[(j, k)];
        }
    }
    let canonical = |f: SchmidtForm, offset: usize| {
        let r = f.rank();
        let mut b = ComplexMatrix::zeros(d1 + d2, r);
        for k in 0..r {
            b[(offset + k, k)] = C64::new(1.0, 0.0);
        }
        SchmidtForm { coefficients: f.coefficients, a_vectors: f.a_vectors, b_vectors: b }
    };
    Ok(CanonicalPair { psi: canonical(f1, 0), phi: canonical(f2, d1), frame_b })
}

fn check_weight(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("mixture weight {t} outside [0, 1]")));
    }
    Ok(())
}

/// `S(t|Ψ⟩⟨Ψ| + (1−t)|Φ⟩⟨Φ|)` from the 2×2 Gram construction.
pub fn mixture_entropy(s1: &BipartiteState, s2: &BipartiteState, t: f64) -> Result<f64> {
    check_weight(t)?;
    s1.check_normalized()?;
    s2.check_normalized()?;
    let overlap = inner_product(s1, s2)?;
    let off = overlap * (t * (1.0 - t)).sqrt();
    let gram = ComplexMatrix::from_vec(2, 2, vec![C64::new(t, 0.0), off, off.conj(), C64::new(1.0 - t, 0.0)])?;
    let spec = qmath::hermitian_eigenvalues(&gram, HERMITIAN_TOL)?;
    qmath::shannon_entropy(&spec.normalized()?)
}

/// `(S(ρ^A_t), S(ρ^B_t))` for `ρ_t = t|Ψ⟩⟨Ψ| + (1−t)|Φ⟩⟨Φ|`.
pub fn reduced_mixture_entropies(s1: &BipartiteState, s2: &BipartiteState, t: f64) -> Result<(f64, f64)> {
    check_weight(t)?;
    s1.check_normalized()?;
    s2.check_normalized()?;
    let blocks = JointBlocks::new(&[s1, s2])?;
    blocks.mixture_entropies(&[t, 1.0 - t])
}

/// One connected component of the joint nonzero pattern of several states,
/// with the local dense coefficient block of each state.
#[derive(Clone, Debug)]
struct Block {
    mats: Vec<ComplexMatrix>,
    multiplicity: u64,
}

/// Joint block decomposition of one or more same-shape states.
///
/// Rows and columns are grouped into connected components of the union of
/// the states' nonzero patterns; every state is block diagonal in that
/// grouping (up to permutation), and so is every linear combination and
/// every mixture of reduced operators. Identical blocks are merged.
#[derive(Clone, Debug)]
pub struct JointBlocks {
    blocks: Vec<Block>,
    states: usize,
}

impl JointBlocks {
    pub fn new(states: &[&BipartiteState]) -> Result<Self> {
        let first = states.first().ok_or_else(|| Error::Dim("no states given".into()))?;
        for s in &states[1..] {
            first.check_same_dims(s)?;
        }
        let (da, db) = first.dims();
        let mut uf = UnionFind::new(da + db);
        for s in states {
            for &(i, j, _) in &s.entries {
                uf.union(i, da + j);
            }
        }
        // component root -> (rows, cols)
        let mut comps: HashMap<usize, (Vec<usize>, Vec<usize>)> = HashMap::new();
        let mut touched_rows = vec![false; da];
        let mut touched_cols = vec![false; db];
        for s in states {
            for &(i, j, _) in &s.entries {
                touched_rows[i] = true;
                touched_cols[j] = true;
            }
        }
        for (i, _) in touched_rows.iter().enumerate().filter(|r| *r.1) {
            comps.entry(uf.find(i)).or_default().0.push(i);
        }
        for (j, _) in touched_cols.iter().enumerate().filter(|c| *c.1) {
            comps.entry(uf.find(da + j)).or_default().1.push(j);
        }
        let mut local_row = vec![0usize; da];
        let mut local_col = vec![0usize; db];
        let mut roots: Vec<usize> = comps.keys().copied().collect();
        roots.sort_unstable();
        let mut index_of_root = HashMap::with_capacity(roots.len());
        let mut shapes = Vec::with_capacity(roots.len());
        for (k, root) in roots.iter().enumerate() {
            let (rows, cols) = &comps[root];
            for (l, &i) in rows.iter().enumerate() {
                local_row[i] = l;
            }
            for (l, &j) in cols.iter().enumerate() {
                local_col[j] = l;
            }
            index_of_root.insert(*root, k);
            shapes.push((rows.len(), cols.len()));
        }
        let mut raw: Vec<Vec<ComplexMatrix>> =
            shapes.iter().map(|&(r, c)| vec![ComplexMatrix::zeros(r, c); states.len()]).collect();
        for (si, s) in states.iter().enumerate() {
            for &(i, j, z) in &s.entries {
                let k = index_of_root[&uf.find(i)];
                raw[k][si][(local_row[i], local_col[j])] = z;
            }
        }
        let mut dedup: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut blocks: Vec<Block> = Vec::new();
        for mats in raw {
            let mut key = vec![mats[0].rows() as u64, mats[0].cols() as u64];
            for m in &mats {
                key.extend(m.as_slice().iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]));
            }
            match dedup.get(&key) {
                Some(&b) => blocks[b].multiplicity += 1,
                None => {
                    dedup.insert(key, blocks.len());
                    blocks.push(Block { mats, multiplicity: 1 });
                }
            }
        }
        Ok(Self { blocks, states: states.len() })
    }

    /// Number of distinct blocks after merging.
    pub fn distinct_blocks(&self) -> usize {
        self.blocks.len()
    }

    fn check_arity(&self, n: usize) {
        assert_eq!(n, self.states, "expected one weight per state");
    }

    /// `‖Σ c_k s_k‖²`.
    pub fn combination_norm_sq(&self, coeffs: &[C64]) -> f64 {
        self.check_arity(coeffs.len());
        self.blocks.iter().map(|b| combine(&b.mats, coeffs).frobenius_norm_sq() * b.multiplicity as f64).sum()
    }

    /// Unnormalized squared singular values of `Σ c_k s_k` with multiplicities.
    fn combination_pairs(&self, coeffs: &[C64]) -> Result<Vec<(f64, u64)>> {
        self.check_arity(coeffs.len());
        let mut pairs = Vec::new();
        for b in &self.blocks {
            let m = combine(&b.mats, coeffs);
            let sv = qmath::singular_values(&m)?;
            pairs.extend(sv.values.iter().map(|s| (s * s, b.multiplicity)));
        }
        Ok(pairs)
    }

    /// Entanglement entropy of the normalized combination `Σ c_k s_k`.
    pub fn combination_entropy(&self, coeffs: &[C64]) -> Result<f64> {
        qmath::weighted_entropy(&self.combination_pairs(coeffs)?)
    }

    /// Entropy of `Σ w_k Tr_{¬side} |s_k⟩⟨s_k|`, normalized by its trace.
    pub fn mixture_side_entropy(&self, weights: &[f64], side: Side) -> Result<f64> {
        self.check_arity(weights.len());
        let mut pairs = Vec::new();
        for b in &self.blocks {
            let dim = match side {
                Side::A => b.mats[0].rows(),
                Side::B => b.mats[0].cols(),
            };
            let mut rho = ComplexMatrix::zeros(dim, dim);
            for (m, &w) in b.mats.iter().zip(weights) {
                if w == 0.0 {
                    continue;
                }
                let part = match side {
                    Side::A => m.gram_rows(),
                    Side::B => m.transpose().gram_rows(),
                };
                rho = rho.axpby(C64::new(1.0, 0.0), &part, C64::new(w, 0.0));
            }
            let spec = qmath::hermitian_eigenvalues(&rho, HERMITIAN_TOL)?;
            pairs.extend(spec.values.iter().map(|&v| (v, b.multiplicity)));
        }
        qmath::weighted_entropy(&pairs)
    }

    /// `(S(ρ^A), S(ρ^B))` of the weighted mixture.
    pub fn mixture_entropies(&self, weights: &[f64]) -> Result<(f64, f64)> {
        Ok((self.mixture_side_entropy(weights, Side::A)?, self.mixture_side_entropy(weights, Side::B)?))
    }

    /// `Tr[σ_1 σ_2]` where `σ_k` is the reduced operator of state `k` on
    /// `side`. Requires exactly two states.
    pub fn reduced_overlap(&self, side: Side) -> f64 {
        self.check_arity(2);
        self.blocks
            .iter()
            .map(|b| {
                let (x, y) = match side {
                    Side::A => (b.mats[0].gram_rows(), b.mats[1].gram_rows()),
                    Side::B => (b.mats[0].transpose().gram_rows(), b.mats[1].transpose().gram_rows()),
                };
                (&x * &y).trace().re * b.multiplicity as f64
            })
            .sum()
    }
}

fn combine(mats: &[ComplexMatrix], coeffs: &[C64]) -> ComplexMatrix {
    let mut out = mats[0].scale(coeffs[0]);
    for (m, &c) in mats.iter().zip(coeffs).skip(1) {
        out = out.axpby(C64::new(1.0, 0.0), m, c);
    }
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
