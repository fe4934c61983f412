//! Spectral utilities: floating real eigenvalues and exact rank-drop points
//! of rectangular matrix pencils.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{LinAlgError, Poly, Rat, RatMatrix, RealRoot, Subspace};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RealEigen {
    pub value: f64,
    pub algebraic: usize,
    pub geometric: usize,
}

/// Real eigenvalues of a square matrix with multiplicities, in increasing order.
///
/// Eigenvalues closer than `sqrt(tol)` are merged (defective eigenvalues
/// split at that scale in floating point); geometric multiplicity comes from
/// a singular-value rank test at `tol`.
pub fn real_eigen(m: &RatMatrix, tol: f64) -> Result<Vec<RealEigen>, LinAlgError> {
    if !m.is_square() {
        return Err(LinAlgError::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(vec![]);
    }
    let a = m.to_f64();
    let merge = tol.sqrt();
    let mut reals: Vec<f64> = a
        .clone()
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= merge * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect();
    reals.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for v in reals {
        match clusters.last_mut() {
            Some(c) if (v - c[c.len() - 1]).abs() <= merge * (1.0 + v.abs()) => c.push(v),
            _ => clusters.push(vec![v]),
        }
    }
    let scale = a.norm().max(1.0);
    Ok(clusters
        .into_iter()
        .map(|c| {
            let value = c.iter().sum::<f64>() / c.len() as f64;
            let shifted = &a - nalgebra::DMatrix::<f64>::identity(n, n) * value;
            let sv = shifted.singular_values();
            let rank = sv.iter().filter(|&&s| s > tol * scale).count();
            RealEigen { value, algebraic: c.len(), geometric: (n - rank).max(1).min(c.len()) }
        })
        .collect())
}

/// Rank-drop structure of the pencil `M − λN` on an interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PencilSpectrum {
    /// Generic rank equals the column count: the kernel is nontrivial exactly
    /// at the listed points.
    Finite(Vec<RealRoot>),
    /// Generic rank is below the column count, so `M − λN` has a kernel for
    /// every `λ`. `common_kernel` is the λ-independent part `ker M ∩ ker N`;
    /// `drops` are the points where the rank falls below the generic rank.
    Singular { generic_rank: usize, common_kernel: Subspace, drops: Vec<RealRoot> },
}

impl PencilSpectrum {
    pub fn points(&self) -> &[RealRoot] {
        match self {
            PencilSpectrum::Finite(p) => p,
            PencilSpectrum::Singular { drops, .. } => drops,
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Greatest common divisor of all `k×k` minors of `M − λN`, as a monic
/// polynomial in `λ` (zero if every minor vanishes identically).
pub fn minors_gcd(m: &RatMatrix, n: &RatMatrix, k: usize) -> Poly {
    if k == 0 {
        return Poly::one();
    }
    let mut g = Poly::zero();
    for rows in combinations(m.nrows(), k) {
        let mr = m.select_rows(&rows);
        let nr = n.select_rows(&rows);
        for cols in combinations(m.ncols(), k) {
            let d = Poly::pencil_det(&mr.select_cols(&cols), &nr.select_cols(&cols));
            g = g.gcd(&d);
            if g.degree() == Some(0) {
                return g;
            }
        }
    }
    g
}

fn generic_rank(m: &RatMatrix, n: &RatMatrix) -> Result<usize, LinAlgError> {
    const PROBES: usize = 3;
    const ATTEMPTS: usize = 24;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_u64 ^ (m.nrows() as u64) << 8 ^ m.ncols() as u64);
    let mut best = 0;
    let mut hits = 0;
    for _ in 0..ATTEMPTS {
        let lam = Rat::new(rng.gen_range(-997i64..=997).into(), rng.gen_range(1i64..=89).into());
        let r = m.sub(&n.scale(&lam)).rank();
        if r > best {
            best = r;
            hits = 1;
        } else if r == best {
            hits += 1;
        }
        if hits >= PROBES {
            // confirm: every (best+1)-minor vanishes identically
            let cap = m.nrows().min(m.ncols());
            if best == cap || minors_gcd(m, n, best + 1).is_zero() {
                return Ok(best);
            }
            hits = 0;
        }
    }
    Err(LinAlgError::ProbeFailure(ATTEMPTS))
}

/// Points of `[lo, hi]` (`hi = None` for `+∞`) where `M − λN` loses rank
/// relative to its generic rank.
pub fn pencil_candidates(
    m: &RatMatrix,
    n: &RatMatrix,
    lo: &Rat,
    hi: Option<&Rat>,
) -> Result<PencilSpectrum, LinAlgError> {
    if m.nrows() != n.nrows() || m.ncols() != n.ncols() {
        return Err(LinAlgError::Dimension(format!(
            "pencil blocks {}x{} and {}x{}",
            m.nrows(),
            m.ncols(),
            n.nrows(),
            n.ncols()
        )));
    }
    if let Some(h) = hi {
        if h < lo {
            return Err(LinAlgError::Dimension("empty interval".into()));
        }
    }
    let r = generic_rank(m, n)?;
    let drops = if r == 0 {
        vec![]
    } else {
        let g = minors_gcd(m, n, r);
        if g.is_zero() {
            // cannot happen once the generic rank is confirmed
            return Err(LinAlgError::ProbeFailure(0));
        }
        g.real_roots_in(lo, hi)
    };
    if r == m.ncols() {
        Ok(PencilSpectrum::Finite(drops))
    } else {
        let common_kernel = m.vstack(n).kernel();
        Ok(PencilSpectrum::Singular { generic_rank: r, common_kernel, drops })
    }
}

/// Null space of a float matrix by SVD at the given relative tolerance;
/// columns of the result span it.
pub fn float_null_space(a: &nalgebra::DMatrix<f64>, tol: f64) -> nalgebra::DMatrix<f64> {
    let (r, c) = a.shape();
    if c == 0 {
        return nalgebra::DMatrix::zeros(0, 0);
    }
    // pad to at least square so the SVD returns a full right basis
    let padded = if r < c {
        let mut p = nalgebra::DMatrix::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let scale = svd.singular_values.max().max(1.0);
    let idx: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] <= tol * scale).collect();
    let mut out = nalgebra::DMatrix::zeros(c, idx.len());
    for (k, &i) in idx.iter().enumerate() {
        for j in 0..c {
            out[(j, k)] = vt[(i, j)];
        }
    }
    out
}
