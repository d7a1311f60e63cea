//! Concrete operator subsystems (spans of Hermitian matrices containing the
//! identity) and coordinate quotients `C^n / span{v}` for sign vectors `v`,
//! with membership, positivity and coset arithmetic at every matrix level.
//! Diagonal systems route every decision through exact rational arithmetic.

use num::complex::Complex64;
use num::{BigRational, Signed, Zero};

use crate::error::{Error, Result};
use crate::feasibility::exact::{rational_from_f64, rational_to_f64, LinearSystem};
use crate::feasibility::{
    solve_feasibility, AffineBlock, FeasibilityOutcome, LmiProblem, SolverConfig,
};
use crate::linalg::{frobenius_inner, min_eigenvalue, Cholesky, HermitianMatrix};

/// Gram-matrix independence threshold for basis validation and span
/// membership residuals.
pub const TOL_SPAN: f64 = 1e-9;

/// Span of Hermitian matrices containing the identity, carrying the order
/// structure induced by its ambient (`M_d`, or `C^d` when diagonal).
#[derive(Debug, Clone)]
pub struct OperatorSubsystem {
    ambient_dim: usize,
    basis: Vec<HermitianMatrix>,
    diagonal: bool,
    /// Exact diagonals of the basis when the system is diagonal.
    exact_diagonals: Option<Vec<Vec<BigRational>>>,
    gram_chol: Cholesky,
}

impl OperatorSubsystem {
    /// Validates and wraps a basis. The identity must be the first element;
    /// when it is absent but lies in the span the basis is rearranged to put
    /// it first, otherwise the construction fails.
    pub fn new(basis: Vec<HermitianMatrix>) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::InvalidInput("empty basis".into()));
        }
        let d = basis[0].dim();
        for b in &basis {
            if b.dim() != d {
                return Err(Error::DimensionMismatch(format!(
                    "basis dims {} vs {}",
                    b.dim(),
                    d
                )));
            }
        }
        check_independent(&basis)?;
        let identity = HermitianMatrix::identity(d);
        let basis = if matrix_eq(&basis[0], &identity) {
            let mut basis = basis;
            basis[0] = identity;
            basis
        } else {
            // Try to express the identity in the span and swap out a basis
            // element with a nonzero coefficient.
            let coords = raw_coords(&basis, &identity)?;
            let residual = span_residual(&basis, &coords, &identity)?;
            if residual > TOL_SPAN {
                return Err(Error::UnitNotInSpan);
            }
            let (drop_idx, _) = coords
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
                .expect("nonempty coords");
            let mut rebased = vec![identity];
            for (i, b) in basis.into_iter().enumerate() {
                if i != drop_idx {
                    rebased.push(b);
                }
            }
            check_independent(&rebased)?;
            rebased
        };
        let diagonal = basis.iter().all(|b| b.is_diagonal());
        let exact_diagonals = diagonal.then(|| {
            basis
                .iter()
                .map(|b| b.diagonal().iter().map(|&x| rational_from_f64(x)).collect())
                .collect()
        });
        let gram_chol = gram_cholesky(&basis)?;
        Ok(Self { ambient_dim: d, basis, diagonal, exact_diagonals, gram_chol })
    }

    /// Diagonal system from rational diagonal vectors. Storage is f64; every
    /// exact decision afterwards runs over the stored binary values, which
    /// coincide with the given rationals whenever those are dyadic.
    pub fn from_rational_diagonals(diags: Vec<Vec<BigRational>>) -> Result<Self> {
        if diags.is_empty() {
            return Err(Error::InvalidInput("empty basis".into()));
        }
        let d = diags[0].len();
        if diags.iter().any(|v| v.len() != d) {
            return Err(Error::DimensionMismatch("ragged diagonal basis".into()));
        }
        let basis: Vec<HermitianMatrix> = diags
            .iter()
            .map(|v| {
                HermitianMatrix::from_diag(&v.iter().map(rational_to_f64).collect::<Vec<_>>())
            })
            .collect();
        Self::new(basis)
    }

    /// The full matrix algebra `M_d` as a subsystem of itself.
    pub fn full_matrix_algebra(d: usize) -> Self {
        let mut basis = vec![HermitianMatrix::identity(d)];
        for b in HermitianMatrix::hermitian_basis(d) {
            basis.push(b);
        }
        // The canonical basis starts with E_11, so the identity-in-span
        // rearrangement applies; `new` cannot fail on this input.
        Self::new(basis_drop_dependent(basis)).expect("canonical full-algebra basis")
    }

    /// The diagonal algebra `C^d` inside `M_d`.
    pub fn full_diagonal_algebra(d: usize) -> Self {
        let mut diags = vec![vec![1.0; d]];
        for i in 1..d {
            let mut v = vec![0.0; d];
            v[i] = 1.0;
            diags.push(v);
        }
        let basis = diags.iter().map(|v| HermitianMatrix::from_diag(v)).collect();
        Self::new(basis).expect("canonical diagonal basis")
    }

    /// Block-diagonal subalgebra `M_{sizes[0]} (+) ... (+) M_{sizes[last]}`.
    pub fn block_diagonal_algebra(sizes: &[usize]) -> Self {
        let d: usize = sizes.iter().sum();
        let mut basis = vec![HermitianMatrix::identity(d)];
        let mut offset = 0usize;
        for &s in sizes {
            for small in HermitianMatrix::hermitian_basis(s) {
                let mut big = HermitianMatrix::zeros(d);
                for i in 0..s {
                    for j in i..s {
                        big.set_entry(offset + i, offset + j, small.entry(i, j));
                    }
                }
                basis.push(big);
            }
            offset += s;
        }
        Self::new(basis_drop_dependent(basis)).expect("canonical block-diagonal basis")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[HermitianMatrix] {
        &self.basis
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    pub fn exact_diagonals(&self) -> Option<&[Vec<BigRational>]> {
        self.exact_diagonals.as_deref()
    }

    pub fn unit(&self) -> HermitianMatrix {
        HermitianMatrix::identity(self.ambient_dim)
    }

    /// Coefficients of `m` in the basis; exact rational elimination decides
    /// membership for diagonal systems, a Gram solve with residual check
    /// otherwise.
    pub fn coords(&self, m: &HermitianMatrix) -> Result<Vec<f64>> {
        if m.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "coords: ambient {} vs {}",
                self.ambient_dim,
                m.dim()
            )));
        }
        if self.diagonal && !m.is_diagonal() {
            return Err(Error::NotInSpan { residual: m.norm_fro() });
        }
        if self.diagonal {
            // Exact elimination over the stored binary values; fall through
            // to the residual test only for inputs with rounding noise.
            let target: Vec<BigRational> =
                m.diagonal().iter().map(|&x| rational_from_f64(x)).collect();
            let basis = self.exact_diagonals.as_ref().expect("diagonal system");
            if let Some(c) = rational_solve(basis, &target) {
                return Ok(c.iter().map(rational_to_f64).collect());
            }
        }
        let coords = self.gram_solve(m)?;
        let residual = span_residual(&self.basis, &coords, m)?;
        if residual > TOL_SPAN {
            return Err(Error::NotInSpan { residual });
        }
        Ok(coords)
    }

    fn gram_solve(&self, m: &HermitianMatrix) -> Result<Vec<f64>> {
        let mut rhs = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            rhs.push(frobenius_inner(b, m)?);
        }
        Ok(self.gram_chol.solve(&rhs))
    }

    pub fn in_span(&self, m: &HermitianMatrix) -> bool {
        self.coords(m).is_ok()
    }

    /// Frobenius-orthogonal projection onto the span.
    pub fn project_onto_span(&self, m: &HermitianMatrix) -> Result<HermitianMatrix> {
        let coords = self.gram_solve(m)?;
        self.combine(&coords)
    }

    pub fn combine(&self, coords: &[f64]) -> Result<HermitianMatrix> {
        if coords.len() != self.basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "combine: {} coords for {} basis elements",
                coords.len(),
                self.basis.len()
            )));
        }
        let mut acc = HermitianMatrix::zeros(self.ambient_dim);
        for (c, b) in coords.iter().zip(self.basis.iter()) {
            acc = acc.add(&b.scale(*c))?;
        }
        Ok(acc)
    }

    /// Membership test for `m` in `M_r(span)`: every `d x d` block of `m`
    /// must lie in the complex span of the basis.
    pub fn contains_at_level(&self, m: &HermitianMatrix, level: usize) -> Result<()> {
        let d = self.ambient_dim;
        if m.dim() != level * d {
            return Err(Error::DimensionMismatch(format!(
                "level-{level} element should have dim {}, got {}",
                level * d,
                m.dim()
            )));
        }
        for p in 0..level {
            for q in 0..level {
                let mut worst = 0.0f64;
                let block = extract_block(m, p, q, d);
                let (re_c, im_c) = self.complex_block_coords(&block)?;
                // residual of the complex reconstruction
                let mut rec = vec![Complex64::new(0.0, 0.0); d * d];
                for (t, b) in self.basis.iter().enumerate() {
                    let w = Complex64::new(re_c[t], im_c[t]);
                    for i in 0..d {
                        for j in 0..d {
                            rec[i * d + j] += w * b.entry(i, j);
                        }
                    }
                }
                for i in 0..d {
                    for j in 0..d {
                        worst = worst.max((rec[i * d + j] - block[i * d + j]).norm());
                    }
                }
                if worst > TOL_SPAN.max(1e-9 * m.norm_fro()) {
                    return Err(Error::NotInSpan { residual: worst });
                }
            }
        }
        Ok(())
    }

    /// Complex coordinates of an arbitrary (not necessarily Hermitian)
    /// `d x d` block with respect to the Hermitian basis.
    fn complex_block_coords(&self, block: &[Complex64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let d = self.ambient_dim;
        let mut rhs_re = Vec::with_capacity(self.basis.len());
        let mut rhs_im = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            // <B, X> = tr(B* X) = sum_ij conj(B_ij) X_ij
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..d {
                for j in 0..d {
                    acc += b.entry(i, j).conj() * block[i * d + j];
                }
            }
            rhs_re.push(acc.re);
            rhs_im.push(acc.im);
        }
        Ok((self.gram_chol.solve(&rhs_re), self.gram_chol.solve(&rhs_im)))
    }

    /// Ambient positivity of an element of the span: `min eig >= margin`.
    /// Exact for diagonal systems.
    pub fn positive_in_subsystem(&self, m: &HermitianMatrix, margin: f64) -> Result<bool> {
        let _ = self.coords(m)?;
        if self.diagonal {
            let margin = rational_from_f64(margin);
            return Ok(m
                .diagonal()
                .iter()
                .all(|&x| rational_from_f64(x) >= margin));
        }
        Ok(min_eigenvalue(m)? >= margin)
    }

    /// Frobenius projection of an `(r d) x (r d)` Hermitian matrix onto
    /// `M_r(span)`: each cell is projected onto the complex span and the
    /// result re-symmetrized.
    pub fn project_onto_level_span(
        &self,
        m: &HermitianMatrix,
        level: usize,
    ) -> Result<HermitianMatrix> {
        let d = self.ambient_dim;
        if m.dim() != level * d {
            return Err(Error::DimensionMismatch(format!(
                "level-{level} projection needs dim {}, got {}",
                level * d,
                m.dim()
            )));
        }
        let n = level * d;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for p in 0..level {
            for q in 0..level {
                let block = extract_block(m, p, q, d);
                let (re_c, im_c) = self.complex_block_coords(&block)?;
                for (t, b) in self.basis.iter().enumerate() {
                    let w = Complex64::new(re_c[t], im_c[t]);
                    if w.norm_sqr() == 0.0 {
                        continue;
                    }
                    for i in 0..d {
                        for j in 0..d {
                            data[(p * d + i) * n + (q * d + j)] += w * b.entry(i, j);
                        }
                    }
                }
            }
        }
        Ok(HermitianMatrix::symmetrize(data, n))
    }

    /// Hermitian basis of `M_r(span)`: diagonal cells carry each basis
    /// element, off-diagonal cells the symmetric and antisymmetric pairings.
    pub fn level_basis(&self, level: usize) -> Vec<HermitianMatrix> {
        let d = self.ambient_dim;
        let n = level * d;
        let mut out = Vec::with_capacity(level * level * self.basis.len());
        for b in &self.basis {
            for p in 0..level {
                let mut m = HermitianMatrix::zeros(n);
                for i in 0..d {
                    for j in i..d {
                        m.set_entry(p * d + i, p * d + j, b.entry(i, j));
                    }
                }
                out.push(m);
            }
        }
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        for b in &self.basis {
            for p in 0..level {
                for q in p + 1..level {
                    let mut sym = HermitianMatrix::zeros(n);
                    let mut asym = HermitianMatrix::zeros(n);
                    for i in 0..d {
                        for j in 0..d {
                            let z = b.entry(i, j) * inv;
                            sym.set_entry(p * d + i, q * d + j, z);
                            asym.set_entry(p * d + i, q * d + j, z * Complex64::new(0.0, 1.0));
                        }
                    }
                    out.push(sym);
                    out.push(asym);
                }
            }
        }
        out
    }

    /// True when the two systems span the same space.
    pub fn same_span(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() == other.dim()
            && self.basis.iter().all(|b| other.in_span(b))
            && other.basis.iter().all(|b| self.in_span(b))
    }
}

fn basis_drop_dependent(basis: Vec<HermitianMatrix>) -> Vec<HermitianMatrix> {
    // Greedy maximal independent subset, keeping order.
    let mut kept: Vec<HermitianMatrix> = Vec::new();
    for b in basis {
        let mut candidate = kept.clone();
        candidate.push(b);
        if check_independent(&candidate).is_ok() {
            kept = candidate;
        }
    }
    kept
}

fn matrix_eq(a: &HermitianMatrix, b: &HermitianMatrix) -> bool {
    a.dim() == b.dim() && a.sub(b).map(|d| d.norm_fro() <= 1e-12).unwrap_or(false)
}

fn check_independent(basis: &[HermitianMatrix]) -> Result<()> {
    let k = basis.len();
    let mut gram = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let v = frobenius_inner(&basis[i], &basis[j])?;
            gram[i * k + j] = v;
            gram[j * k + i] = v;
        }
    }
    let gm = HermitianMatrix::from_real(&gram, k)?;
    let min = min_eigenvalue(&gm)?;
    if min < TOL_SPAN {
        return Err(Error::DependentBasis(min));
    }
    Ok(())
}

fn gram_cholesky(basis: &[HermitianMatrix]) -> Result<Cholesky> {
    let k = basis.len();
    let mut gram = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let v = frobenius_inner(&basis[i], &basis[j])?;
            gram[i * k + j] = v;
            gram[j * k + i] = v;
        }
    }
    Cholesky::factor(&gram, k, 0.0)
        .ok_or_else(|| Error::DependentBasis(0.0))
}

fn raw_coords(basis: &[HermitianMatrix], m: &HermitianMatrix) -> Result<Vec<f64>> {
    let chol = gram_cholesky(basis)?;
    let mut rhs = Vec::with_capacity(basis.len());
    for b in basis {
        rhs.push(frobenius_inner(b, m)?);
    }
    Ok(chol.solve(&rhs))
}

fn span_residual(
    basis: &[HermitianMatrix],
    coords: &[f64],
    m: &HermitianMatrix,
) -> Result<f64> {
    let mut acc = HermitianMatrix::zeros(m.dim());
    for (c, b) in coords.iter().zip(basis.iter()) {
        acc = acc.add(&b.scale(*c))?;
    }
    Ok(acc.sub(m)?.norm_fro())
}

fn extract_block(m: &HermitianMatrix, p: usize, q: usize, d: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for j in 0..d {
            out[i * d + j] = m.entry(p * d + i, q * d + j);
        }
    }
    out
}

/// Exact solve of `basis^T c = target` (columns = basis vectors); `None` when
/// inconsistent.
fn rational_solve(basis: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = target.len();
    let cols = basis.len();
    // Augmented matrix [A | t] with A[i][j] = basis[j][i].
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..cols).map(|j| basis[j][i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivot_of_col = vec![usize::MAX; cols];
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=cols {
                    let delta = &f * &a[r][j];
                    a[i][j] = &a[i][j] - delta;
                }
            }
        }
        pivot_of_col[c] = r;
        r += 1;
        if r == rows {
            break;
        }
    }
    // Inconsistent when a zero row has nonzero rhs.
    for i in r..rows {
        if !a[i][cols].is_zero() {
            return None;
        }
    }
    let mut coords = vec![BigRational::zero(); cols];
    for c in 0..cols {
        if pivot_of_col[c] != usize::MAX {
            coords[c] = a[pivot_of_col[c]][cols].clone();
        }
    }
    // Free columns default to zero; verify consistency.
    for i in 0..rows {
        let mut acc = BigRational::zero();
        for c in 0..cols {
            acc += &basis[c][i] * &coords[c];
        }
        if acc != target[i] {
            return None;
        }
    }
    Some(coords)
}

// ---------------------------------------------------------------------------
// Quotients
// ---------------------------------------------------------------------------

/// Quotient `C^n / span{weights}` for a sign vector with entries of both
/// signs (a null subspace, so positives lift to coordinatewise positives).
/// The standard instance has `k` ones followed by `m` minus-ones.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientSystem {
    weights: Vec<f64>,
    split: Option<(usize, usize)>,
}

impl QuotientSystem {
    pub fn standard(k: usize, m: usize) -> Result<Self> {
        if k < 1 || m < 1 {
            return Err(Error::InvalidDimension(format!(
                "quotient needs k, m >= 1, got ({k}, {m})"
            )));
        }
        let mut weights = vec![1.0; k];
        weights.extend(std::iter::repeat(-1.0).take(m));
        Ok(Self { weights, split: Some((k, m)) })
    }

    /// General one-dimensional null-subspace quotient.
    pub fn general(weights: Vec<f64>) -> Result<Self> {
        let has_pos = weights.iter().any(|&w| w > 0.0);
        let has_neg = weights.iter().any(|&w| w < 0.0);
        if !has_pos || !has_neg {
            return Err(Error::InvalidInput(
                "spanning vector must carry both signs to be a null subspace".into(),
            ));
        }
        let split = standard_split(&weights);
        Ok(Self { weights, split })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(k, m)` for the standard sign pattern.
    pub fn split(&self) -> Option<(usize, usize)> {
        self.split
    }

    pub fn element(&self, level: usize, blocks: Vec<HermitianMatrix>) -> Result<QuotientElement> {
        QuotientElement::new(self.clone(), level, blocks)
    }

    pub fn scalar_element(&self, coords: &[f64]) -> Result<QuotientElement> {
        let blocks = coords.iter().map(|&c| HermitianMatrix::from_diag(&[c])).collect();
        QuotientElement::new(self.clone(), 1, blocks)
    }

    /// The order unit: all coordinates equal to the identity.
    pub fn unit(&self, level: usize) -> QuotientElement {
        let blocks = (0..self.n()).map(|_| HermitianMatrix::identity(level)).collect();
        QuotientElement::new(self.clone(), level, blocks).expect("unit blocks")
    }

    pub fn zero(&self, level: usize) -> QuotientElement {
        let blocks = (0..self.n()).map(|_| HermitianMatrix::zeros(level)).collect();
        QuotientElement::new(self.clone(), level, blocks).expect("zero blocks")
    }
}

fn standard_split(weights: &[f64]) -> Option<(usize, usize)> {
    let k = weights.iter().take_while(|&&w| w == 1.0).count();
    if k == 0 || k == weights.len() {
        return None;
    }
    let m = weights.len() - k;
    if weights[k..].iter().all(|&w| w == -1.0) {
        Some((k, m))
    } else {
        None
    }
}

/// Element of `M_r(C^n / J)` stored as a representative: one Hermitian
/// `r x r` block per coordinate. Adding `t * weights (x) T` moves the
/// representative, not the element.
#[derive(Debug, Clone)]
pub struct QuotientElement {
    pub quotient: QuotientSystem,
    pub level: usize,
    pub blocks: Vec<HermitianMatrix>,
}

impl QuotientElement {
    pub fn new(
        quotient: QuotientSystem,
        level: usize,
        blocks: Vec<HermitianMatrix>,
    ) -> Result<Self> {
        if blocks.len() != quotient.n() {
            return Err(Error::DimensionMismatch(format!(
                "quotient has {} coordinates, got {} blocks",
                quotient.n(),
                blocks.len()
            )));
        }
        if blocks.iter().any(|b| b.dim() != level) {
            return Err(Error::DimensionMismatch(
                "every block must be level x level".into(),
            ));
        }
        Ok(Self { quotient, level, blocks })
    }

    /// Shifts the representative by `weights (x) T`; the coset is unchanged.
    pub fn shift_representative(&self, t: &HermitianMatrix) -> Result<Self> {
        if t.dim() != self.level {
            return Err(Error::DimensionMismatch("shift must be level-sized".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(self.quotient.weights.iter())
            .map(|(b, &w)| b.add(&t.scale(w)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.quotient.clone(), self.level, blocks)
    }
}

/// Exact coset equality: the difference of representatives must equal
/// `weights (x) T` for a single Hermitian `T`. Decided in rational
/// arithmetic over the stored entries, no tolerances.
pub fn quotient_equal(a: &QuotientElement, b: &QuotientElement) -> Result<bool> {
    if a.quotient != b.quotient || a.level != b.level {
        return Err(Error::DimensionMismatch(
            "coset comparison needs matching quotient and level".into(),
        ));
    }
    let weights = &a.quotient.weights;
    let pivot = weights
        .iter()
        .position(|&w| w != 0.0)
        .expect("null-subspace vector is nonzero");
    let w0 = rational_from_f64(weights[pivot]);
    // T = diff_pivot / w_pivot, then every coordinate must match w_p * T.
    let diff_pivot = a.blocks[pivot].sub(&b.blocks[pivot])?;
    let r = a.level;
    let t: Vec<Vec<BigRational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let z = diff_pivot.entry(i, j);
                    // handled as re/im pair below; store re here
                    rational_from_f64(z.re) / &w0
                })
                .collect()
        })
        .collect();
    let t_im: Vec<Vec<BigRational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| rational_from_f64(diff_pivot.entry(i, j).im) / &w0)
                .collect()
        })
        .collect();
    for (p, &w) in weights.iter().enumerate() {
        let diff = a.blocks[p].sub(&b.blocks[p])?;
        let w = rational_from_f64(w);
        for i in 0..r {
            for j in 0..r {
                let z = diff.entry(i, j);
                if rational_from_f64(z.re) != &w * &t[i][j]
                    || rational_from_f64(z.im) != &w * &t_im[i][j]
                {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Decides whether the coset has a representative dominating `margin * I`:
/// a Hermitian `T` with `A_p + w_p T >= margin * I` for every coordinate.
/// Level-1 and diagonal instances are decided exactly; the rest goes through
/// the numeric solver.
pub fn quotient_positive(
    e: &QuotientElement,
    margin: f64,
    config: &SolverConfig,
) -> Result<FeasibilityOutcome> {
    let weights = &e.quotient.weights;
    let r = e.level;
    let all_diagonal = e.blocks.iter().all(|b| b.is_diagonal());
    if all_diagonal {
        // A diagonal representative admits a diagonal shift: compressing any
        // solution T to its diagonal preserves every constraint.
        let mut system = LinearSystem::new(r);
        let margin_r = rational_from_f64(margin);
        for (p, &w) in weights.iter().enumerate() {
            let w = rational_from_f64(w);
            for j in 0..r {
                let constant =
                    rational_from_f64(e.blocks[p].entry(j, j).re) - &margin_r;
                let mut coeffs = vec![BigRational::zero(); r];
                coeffs[j] = w.clone();
                system.push(constant, coeffs);
            }
        }
        let exact = system.solve();
        let dims = vec![r; weights.len()];
        return Ok(crate::feasibility::exact_linear_outcome(&system, &exact, &dims));
    }
    let basis = HermitianMatrix::hermitian_basis(r);
    let blocks: Vec<AffineBlock> = e
        .blocks
        .iter()
        .zip(weights.iter())
        .map(|(a, &w)| {
            let coeffs: Vec<HermitianMatrix> = basis.iter().map(|b| b.scale(w)).collect();
            AffineBlock::new(a.clone(), coeffs).with_margin(margin.max(0.0), false)
        })
        .collect();
    let problem = LmiProblem::new(r * r, blocks)?;
    solve_feasibility(&problem, config)
}

/// The shift matrix encoded by a `quotient_positive` witness.
pub fn quotient_witness_shift(e: &QuotientElement, witness: &[f64]) -> HermitianMatrix {
    let r = e.level;
    if witness.len() == r {
        return HermitianMatrix::from_diag(witness);
    }
    let basis = HermitianMatrix::hermitian_basis(r);
    let mut t = HermitianMatrix::zeros(r);
    for (c, b) in witness.iter().zip(basis.iter()) {
        t = t.add(&b.scale(*c)).expect("same dims");
    }
    t
}

/// A positive representative extracted from a `quotient_positive` witness.
pub fn positive_representative(
    e: &QuotientElement,
    witness: &[f64],
) -> Result<Vec<HermitianMatrix>> {
    let t = quotient_witness_shift(e, witness);
    Ok(e.shift_representative(&t)?.blocks)
}

// ---------------------------------------------------------------------------
// Coproduct and inter-quotient maps
// ---------------------------------------------------------------------------

/// The amalgamation of `C^k` and `C^m` over their units, realized as the
/// standard quotient with the two coordinate embeddings `x -> (2x, 0) + J`
/// and `y -> (0, 2y) + J`.
#[derive(Debug, Clone)]
pub struct Coproduct {
    pub system: QuotientSystem,
    k: usize,
    m: usize,
}

pub fn coproduct(k: usize, m: usize) -> Result<Coproduct> {
    Ok(Coproduct { system: QuotientSystem::standard(k, m)?, k, m })
}

impl Coproduct {
    pub fn embed_left(&self, x: &[f64]) -> Result<QuotientElement> {
        if x.len() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "left factor has {} coordinates, got {}",
                self.k,
                x.len()
            )));
        }
        let mut coords = vec![0.0; self.k + self.m];
        for (i, &v) in x.iter().enumerate() {
            coords[i] = 2.0 * v;
        }
        self.system.scalar_element(&coords)
    }

    pub fn embed_right(&self, y: &[f64]) -> Result<QuotientElement> {
        if y.len() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "right factor has {} coordinates, got {}",
                self.m,
                y.len()
            )));
        }
        let mut coords = vec![0.0; self.k + self.m];
        for (i, &v) in y.iter().enumerate() {
            coords[self.k + i] = 2.0 * v;
        }
        self.system.scalar_element(&coords)
    }
}

/// Embedding of a small standard quotient into a larger one: left-pad with
/// copies of the first coordinate, right-pad with copies of the last.
pub fn embed_quotient(
    small: &QuotientSystem,
    big: &QuotientSystem,
    e: &QuotientElement,
) -> Result<QuotientElement> {
    let (k, m) = small
        .split()
        .ok_or_else(|| Error::InvalidInput("embedding needs standard quotients".into()))?;
    let (k1, m1) = big
        .split()
        .ok_or_else(|| Error::InvalidInput("embedding needs standard quotients".into()))?;
    if k > k1 || m > m1 {
        return Err(Error::DimensionMismatch(format!(
            "cannot embed ({k},{m}) into ({k1},{m1})"
        )));
    }
    if e.quotient != *small {
        return Err(Error::DimensionMismatch("element not in the small quotient".into()));
    }
    let mut blocks = Vec::with_capacity(k1 + m1);
    for _ in 0..k1 - k {
        blocks.push(e.blocks[0].clone());
    }
    blocks.extend(e.blocks[..k].iter().cloned());
    blocks.extend(e.blocks[k..k + m].iter().cloned());
    for _ in 0..m1 - m {
        blocks.push(e.blocks[k + m - 1].clone());
    }
    QuotientElement::new(big.clone(), e.level, blocks)
}

/// Projection back: drop the padded coordinates.
pub fn project_quotient(
    big: &QuotientSystem,
    small: &QuotientSystem,
    e: &QuotientElement,
) -> Result<QuotientElement> {
    let (k, m) = small
        .split()
        .ok_or_else(|| Error::InvalidInput("projection needs standard quotients".into()))?;
    let (k1, m1) = big
        .split()
        .ok_or_else(|| Error::InvalidInput("projection needs standard quotients".into()))?;
    if k > k1 || m > m1 {
        return Err(Error::DimensionMismatch(format!(
            "cannot project ({k1},{m1}) onto ({k},{m})"
        )));
    }
    if e.quotient != *big {
        return Err(Error::DimensionMismatch("element not in the big quotient".into()));
    }
    let mut blocks = Vec::with_capacity(k + m);
    blocks.extend(e.blocks[k1 - k..k1].iter().cloned());
    blocks.extend(e.blocks[k1..k1 + m].iter().cloned());
    QuotientElement::new(small.clone(), e.level, blocks)
}
