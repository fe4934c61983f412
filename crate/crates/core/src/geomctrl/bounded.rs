use nalgebra::{Complex, DMatrix};

use super::{tstar, vstar, GeomError, Sigma};
use crate::exactla::eigen::float_null_space;
use crate::exactla::{rationalize, Poly, Rat, RatMatrix, Subspace, DEFAULT_TOL};

/// States of `V*(U,Σ)` admitting a bounded output-nulling trajectory.
#[derive(Debug, Clone, PartialEq)]
pub enum VStarG {
    Exact(Subspace),
    /// Irrational subspace; columns of `basis` span it approximately.
    Numerical {
        ambient: usize,
        basis: Vec<Vec<f64>>,
    },
}

impl VStarG {
    pub fn dim(&self) -> usize {
        match self {
            VStarG::Exact(s) => s.dim(),
            VStarG::Numerical { basis, .. } => basis.len(),
        }
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
    pub fn exact(&self) -> Option<&Subspace> {
        match self {
            VStarG::Exact(s) => Some(s),
            VStarG::Numerical { .. } => None,
        }
    }
}

/// Matrix of the map induced on `V*/R*` by output-nulling steps, in the
/// coordinates of the complement basis `w`.
fn quotient_map(sys: &Sigma, v: &Subspace, r: &Subspace, w: &RatMatrix) -> Result<RatMatrix, GeomError> {
    let n = sys.n();
    let vb = v.basis();
    let lhs = RatMatrix::block(&[vec![&sys.b, &vb.neg()], vec![&sys.d, &RatMatrix::zeros(sys.s(), vb.ncols())]]);
    let coords = r.basis().hstack(w);
    let k = w.ncols();
    let mut cols = Vec::with_capacity(k);
    for j in 0..k {
        let wj = w.col(j);
        let mut rhs: Vec<Rat> = sys.a.mul_vec(&wj).into_iter().map(|x| -x).collect();
        rhs.extend(sys.c.mul_vec(&wj).into_iter().map(|x| -x));
        let sol = lhs.solve(&rhs).ok_or(GeomError::IllDefinedQuotient)?;
        let next = vb.mul_vec(&sol[sys.m()..]);
        let z = coords.solve(&next).ok_or(GeomError::IllDefinedQuotient)?;
        cols.push(z[r.dim()..].to_vec());
    }
    debug_assert_eq!(coords.nrows(), n);
    Ok(RatMatrix::from_cols(k, &cols))
}

fn complex_null(m: &DMatrix<Complex<f64>>) -> DMatrix<f64> {
    // real part suffices: the product is real up to rounding
    float_null_space(&m.map(|z| z.re), 1e-7)
}

/// Orthonormal basis of the bounded subspace of `a` (columns); moduli within
/// `unit_tol` of 1 count as on the unit circle.
fn bounded_float(a: &DMatrix<f64>, unit_tol: f64) -> DMatrix<f64> {
    let k = a.nrows();
    let eig = a.clone().complex_eigenvalues();
    let ac = a.map(|x| Complex::new(x, 0.0));
    let id = DMatrix::<Complex<f64>>::identity(k, k);
    let mut stable = id.clone();
    let mut unit: Vec<Complex<f64>> = Vec::new();
    for z in eig.iter() {
        let r = z.norm();
        if r < 1.0 - unit_tol {
            stable = &stable * (&ac - &id * *z);
        } else if (r - 1.0).abs() <= unit_tol && z.im >= -unit_tol && !unit.iter().any(|u| (u - z).norm() < 1e-6) {
            unit.push(*z);
        }
    }
    let mut blocks: Vec<DMatrix<f64>> = Vec::new();
    if stable != id {
        blocks.push(complex_null(&stable));
    }
    for z in unit {
        let m = if z.im.abs() <= unit_tol {
            a - DMatrix::<f64>::identity(k, k) * z.re
        } else {
            a * a - a * (2.0 * z.re) + DMatrix::<f64>::identity(k, k) * z.norm_sqr()
        };
        blocks.push(float_null_space(&m, 1e-7));
    }
    let total: usize = blocks.iter().map(|b| b.ncols()).sum();
    if total == 0 {
        return DMatrix::zeros(k, 0);
    }
    let mut all = DMatrix::zeros(k, total);
    let mut c = 0;
    for b in blocks {
        for j in 0..b.ncols() {
            all.set_column(c, &b.column(j));
            c += 1;
        }
    }
    let svd = all.svd(true, false);
    let u = svd.u.expect("requested U");
    let scale = svd.singular_values.max().max(1.0);
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] > 1e-7 * scale).collect();
    let mut out = DMatrix::zeros(k, keep.len());
    for (t, &i) in keep.iter().enumerate() {
        out.set_column(t, &u.column(i));
    }
    out
}

/// Rounds a float column basis to a nearby rational one (via float RREF).
fn snap(basis: &DMatrix<f64>) -> Option<RatMatrix> {
    let (k, j) = basis.shape();
    let mut m = basis.transpose();
    let mut row = 0;
    for col in 0..k {
        if row == j {
            break;
        }
        let (p, best) = (row..j).map(|i| (i, m[(i, col)].abs())).fold((row, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        if best < 1e-6 {
            continue;
        }
        m.swap_rows(row, p);
        let piv = m[(row, col)];
        for c in 0..k {
            m[(row, c)] /= piv;
        }
        for i in 0..j {
            if i != row {
                let f = m[(i, col)];
                for c in 0..k {
                    m[(i, c)] -= f * m[(row, c)];
                }
            }
        }
        row += 1;
    }
    if row < j {
        return None;
    }
    let rows: Vec<Vec<Rat>> = (0..j).map(|i| (0..k).map(|c| rationalize(m[(i, c)], 1_000_000)).collect()).collect();
    Some(RatMatrix::from_rows(k, &rows).transpose())
}

/// Checks that `s` (columns) is `a`-invariant, `a` restricted to it is
/// Schur stable and the induced quotient map has no root in the closed disk.
fn verify_split(a: &RatMatrix, s: &RatMatrix) -> bool {
    let k = a.nrows();
    let sub = Subspace::from_matrix_cols(s);
    if sub.dim() != s.ncols() {
        return false;
    }
    let img = sub.image(a).expect("square map");
    if !sub.contains(&img).unwrap_or(false) {
        return false;
    }
    let comp = Subspace::full(k).complement_basis(&sub).expect("subspace of full space");
    let t = sub.basis().hstack(&comp);
    let Some(tinv) = t.inverse() else { return false };
    let conj = tinv.mul(a).mul(&t);
    let d = sub.dim();
    let inner: Vec<usize> = (0..d).collect();
    let outer: Vec<usize> = (d..k).collect();
    let top = conj.select_rows(&inner).select_cols(&inner);
    let bottom = conj.select_rows(&outer).select_cols(&outer);
    Poly::charpoly(&top).is_schur_stable() && Poly::charpoly(&bottom).all_roots_outside_closed_disk()
}

/// `V*_g(U, Σ)`.
///
/// Triviality is decided exactly: the answer is `{0}` iff `R*(U,Σ) = {0}`
/// and the quotient dynamics have every eigenvalue outside the closed unit
/// disk. A mixed spectrum falls back to a floating split, returned exactly
/// when the rounded subspace verifies.
pub fn vstar_g(sys: &Sigma, u: &Subspace) -> Result<VStarG, GeomError> {
    vstar_g_with(sys, u, DEFAULT_TOL)
}

/// [`vstar_g`] with the unit-circle tolerance of the floating split.
pub fn vstar_g_with(sys: &Sigma, u: &Subspace, tol: f64) -> Result<VStarG, GeomError> {
    let su = sys.restrict(u)?;
    let v = vstar(&su);
    let t = tstar(&su);
    let r = v.intersect(&t).expect("same ambient");
    if v == r {
        return Ok(VStarG::Exact(v));
    }
    let w = v.complement_basis(&r)?;
    let abar = quotient_map(&su, &v, &r, &w)?;
    let p = Poly::charpoly(&abar);
    if p.all_roots_outside_closed_disk() {
        return Ok(VStarG::Exact(r));
    }
    if p.is_schur_stable() {
        return Ok(VStarG::Exact(v));
    }
    let fb = bounded_float(&abar.to_f64(), tol);
    if let Some(s) = snap(&fb) {
        if verify_split(&abar, &s) {
            let lifted = Subspace::from_matrix_cols(&w.mul(&s));
            return Ok(VStarG::Exact(r.sum(&lifted).expect("same ambient")));
        }
    }
    let wf = w.to_f64();
    let mut basis: Vec<Vec<f64>> = r.basis().to_f64().column_iter().map(|c| c.iter().copied().collect()).collect();
    let lifted = &wf * &fb;
    basis.extend(lifted.column_iter().map(|c| c.iter().copied().collect::<Vec<f64>>()));
    Ok(VStarG::Numerical { ambient: sys.n(), basis })
}
