//! Two-stage precoding: inter-group null-space projection F_g, per-user
//! private null-steering vectors and the random common vector.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use crate::channel::{complex_normal_vector, GroupModel};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Singular values at or below `σ_max · NULL_TOL` count as zero.
pub const NULL_TOL: f64 = 1e-10;

/// How the kept columns are picked out of the null space E⁰_g.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisOrder {
    /// Eigenvectors of E⁰ᴴ R_g E⁰, strongest first.
    #[default]
    OwnEnergy,
    /// Gram–Schmidt of the projected canonical vectors e₁, e₂, …
    Canonical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupPrecoder {
    /// Column-orthonormal F_g, (M/2)×(M̄/2).
    pub f: CMatrix,
    /// M̄, counting both polarizations.
    pub projected_dim: usize,
}

impl GroupPrecoder {
    /// Columns of F_g, i.e. M̄/2.
    pub fn dim(&self) -> usize {
        self.f.ncols()
    }

    /// K_g = I₂ ⊗ F_g.
    pub fn k(&self) -> CMatrix {
        let (n, d) = self.f.shape();
        let mut k = CMatrix::zeros(2 * n, 2 * d);
        k.view_mut((0, 0), (n, d)).copy_from(&self.f);
        k.view_mut((n, d), (n, d)).copy_from(&self.f);
        k
    }

    /// Fᴴh.
    pub fn project(&self, h: &CVector) -> CVector {
        self.f.ad_mul(h)
    }
}

/// Orthonormal basis of the orthogonal complement of the column span of `a`.
pub fn left_null_space(a: &CMatrix) -> CMatrix {
    let (n, k) = a.shape();
    if k == 0 {
        return CMatrix::identity(n, n);
    }
    let mut padded = CMatrix::zeros(n, n.max(k));
    padded.view_mut((0, 0), (n, k)).copy_from(a);
    let svd = padded.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cols: Vec<usize> = (0..n)
        .filter(|&i| svd.singular_values[i] <= smax * NULL_TOL)
        .collect();
    let mut e0 = CMatrix::zeros(n, cols.len());
    for (j, &i) in cols.iter().enumerate() {
        e0.set_column(j, &u.column(i));
    }
    e0
}

/// Stacks the other groups' eigenvectors, returns `columns` orthonormal
/// vectors from their common null space, or the shortfall.
pub fn null_space_projector(
    own: &GroupModel,
    others: &[&GroupModel],
    columns: usize,
    order: BasisOrder,
) -> core::result::Result<CMatrix, (usize, usize)> {
    let n = own.antennas();
    let stacked: usize = others.iter().map(|g| g.reduced_rank).sum();
    let mut ustar = CMatrix::zeros(n, stacked);
    let mut at = 0;
    for g in others {
        ustar.view_mut((0, at), (n, g.reduced_rank)).copy_from(&g.eigvecs);
        at += g.reduced_rank;
    }
    let e0 = left_null_space(&ustar);
    if e0.ncols() < columns || columns == 0 {
        return Err((e0.ncols(), columns));
    }
    Ok(match order {
        BasisOrder::OwnEnergy => {
            let q = e0.adjoint() * &own.covariance * &e0;
            let q = (&q + q.adjoint()) * C64::from(0.5);
            let eig = q.symmetric_eigen();
            let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
            idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
            let mut v = CMatrix::zeros(e0.ncols(), columns);
            for (j, &i) in idx.iter().take(columns).enumerate() {
                v.set_column(j, &eig.eigenvectors.column(i));
            }
            e0 * v
        }
        BasisOrder::Canonical => {
            let proj = &e0 * e0.adjoint();
            let mut basis: Vec<CVector> = Vec::with_capacity(columns);
            for k in 0..n {
                if basis.len() == columns {
                    break;
                }
                let mut v: CVector = proj.column(k).into_owned();
                let before = libm::sqrt(v.norm_squared());
                orthogonalize(&mut v, &basis);
                orthogonalize(&mut v, &basis);
                let after = libm::sqrt(v.norm_squared());
                if before > 1e-8 && after > 1e-8 * before.max(1.0) {
                    v /= C64::from(after);
                    basis.push(v);
                }
            }
            CMatrix::from_columns(&basis)
        }
    })
}

/// F_g for the dual-polarized array: M̄/2 columns orthogonal to every
/// other group's dominant eigenspace.
pub fn group_precoder(
    own: &GroupModel,
    others: &[&GroupModel],
    projected_dim: usize,
    order: BasisOrder,
) -> Result<GroupPrecoder> {
    if projected_dim < 2 || projected_dim % 2 != 0 {
        return Err(Error::Config(format!(
            "projected_dim = {projected_dim} must be even and at least 2"
        )));
    }
    let n = own.antennas();
    let stacked: usize = others.iter().map(|g| g.reduced_rank).sum();
    if n <= stacked {
        return Err(Error::Constraint {
            inequality: "M/2 > sum of other groups' reduced ranks",
            detail: format!("M/2 = {n}, sum = {stacked}"),
        });
    }
    if projected_dim / 2 > n - stacked {
        return Err(Error::Constraint {
            inequality: "projected_dim/2 <= M/2 - sum of other groups' reduced ranks",
            detail: format!("projected_dim/2 = {}, M/2 - sum = {}", projected_dim / 2, n - stacked),
        });
    }
    let f = null_space_projector(own, others, projected_dim / 2, order).map_err(|(have, want)| {
        Error::Constraint {
            inequality: "projected_dim/2 <= dim null(U*_g)",
            detail: format!("null space has {have} dimensions, {want} requested"),
        }
    })?;
    Ok(GroupPrecoder { f, projected_dim })
}

fn orthogonalize(v: &mut CVector, basis: &[CVector]) {
    for q in basis {
        let c = q.dotc(v);
        v.axpy(-c, q, C64::from(1.0));
    }
}

/// Private precoders p_u: unit vectors orthogonal to the effective
/// channels Fᴴh^{hh}_{u'} of all other users, chosen as the normalized
/// projection of the user's own effective channel, which maximizes
/// |(h^{hh}_u)ᴴF p_u| over that null space.
pub fn private_precoders(effective_hh: &[CVector]) -> Result<Vec<CVector>> {
    let users = effective_hh.len();
    if users == 0 {
        return Ok(Vec::new());
    }
    let d = effective_hh[0].len();
    if effective_hh.iter().any(|e| e.len() != d) {
        return Err(Error::Config("effective channels differ in length".into()));
    }
    if users - 1 >= d {
        return Err(Error::Constraint {
            inequality: "projected_dim/2 > users_per_group - 1",
            detail: format!("projected_dim/2 = {d}, users_per_group - 1 = {}", users - 1),
        });
    }
    let mut out = Vec::with_capacity(users);
    let mut basis: Vec<CVector> = Vec::with_capacity(users - 1);
    for u in 0..users {
        basis.clear();
        for (k, e) in effective_hh.iter().enumerate() {
            if k == u {
                continue;
            }
            let mut v = e.clone();
            let scale = libm::sqrt(v.norm_squared());
            orthogonalize(&mut v, &basis);
            orthogonalize(&mut v, &basis);
            let nv = libm::sqrt(v.norm_squared());
            if nv > 1e-13 * scale {
                v /= C64::from(nv);
                basis.push(v);
            }
        }
        let mut p = effective_hh[u].clone();
        let own = libm::sqrt(p.norm_squared());
        orthogonalize(&mut p, &basis);
        orthogonalize(&mut p, &basis);
        let mut np = libm::sqrt(p.norm_squared());
        if !(np > 1e-13 * own) {
            // Own channel lies in the others' span: any null vector will do.
            for k in 0..d {
                p = CVector::zeros(d);
                p[k] = C64::from(1.0);
                orthogonalize(&mut p, &basis);
                orthogonalize(&mut p, &basis);
                np = libm::sqrt(p.norm_squared());
                if np > 1e-8 {
                    break;
                }
            }
        }
        p /= C64::from(np);
        out.push(p);
    }
    Ok(out)
}

/// Random common precoder: i.i.d. CN(0, 1) entries, normalized.
pub fn common_precoder<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<CVector> {
    if dim == 0 {
        return Err(Error::Config("common precoder dimension must be at least 1".into()));
    }
    let mut c = complex_normal_vector(dim, rng);
    let n = libm::sqrt(c.norm_squared());
    c /= C64::from(n);
    Ok(c)
}

/// Common and private vectors of one group for one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderSet {
    pub common: CVector,
    pub private: Vec<CVector>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{eigen_structure, ArrayGeometry, OneRingSpec};
    use crate::max_modulus;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn groups() -> Vec<GroupModel> {
        [30.0, 190.0, 350.0, 150.0]
            .iter()
            .map(|&az| {
                let spec = OneRingSpec {
                    antennas: 50,
                    azimuth_deg: az,
                    angular_spread_deg: 10.0,
                    spacing_wavelengths: 0.5,
                    geometry: ArrayGeometry::Circular,
                };
                GroupModel::from_spec(&spec, 1e-9, 15).unwrap()
            })
            .collect()
    }

    #[test]
    fn single_group_returns_canonical_columns() {
        let own = eigen_structure(&CMatrix::identity(6, 6), 1e-9, 2).unwrap();
        let p = group_precoder(&own, &[], 4, BasisOrder::Canonical).unwrap();
        assert_eq!(p.f, CMatrix::identity(6, 2));
        let p = group_precoder(&own, &[], 4, BasisOrder::OwnEnergy).unwrap();
        assert!(max_modulus(&(p.f.adjoint() * &p.f - CMatrix::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn null_space_isolates_groups() {
        let gs = groups();
        for order in [BasisOrder::OwnEnergy, BasisOrder::Canonical] {
            for g in 0..4 {
                let others: Vec<&GroupModel> = (0..4).filter(|&k| k != g).map(|k| &gs[k]).collect();
                let p = group_precoder(&gs[g], &others, 6, order).unwrap();
                assert!(max_modulus(&(p.f.adjoint() * &p.f - CMatrix::identity(3, 3))) < 1e-10);
                for o in &others {
                    assert!(max_modulus(&(o.eigvecs.adjoint() * &p.f)) < 1e-10);
                }
                let own = (p.f.adjoint() * &gs[g].covariance * &p.f).trace().re;
                assert!(own > 1.0, "group {g}: tr(FᴴRF) = {own}");
            }
        }
    }

    #[test]
    fn dimension_constraints_are_named() {
        let gs = groups();
        let others: Vec<&GroupModel> = gs[1..].iter().collect();
        match group_precoder(&gs[0], &others, 60, BasisOrder::OwnEnergy) {
            Err(Error::Constraint { inequality, .. }) => assert!(inequality.starts_with("projected_dim/2 <=")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(group_precoder(&gs[0], &others, 5, BasisOrder::OwnEnergy), Err(Error::Config(_))));
    }

    #[test]
    fn single_user_private_is_matched_filter() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let e = complex_normal_vector(3, &mut rng);
        let p = private_precoders(core::slice::from_ref(&e)).unwrap();
        let mf = &e / C64::from(e.norm());
        assert!((&p[0] - mf).norm() < 1e-14);
    }

    #[test]
    fn private_isolation_and_gain() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let e: Vec<CVector> = (0..3).map(|_| complex_normal_vector(3, &mut rng)).collect();
            let p = private_precoders(&e).unwrap();
            for u in 0..3 {
                assert!((p[u].norm() - 1.0).abs() < 1e-13);
                assert!(e[u].dotc(&p[u]).norm_sqr() > 0.0);
                for v in 0..3 {
                    if v != u {
                        assert!(e[v].dotc(&p[u]).norm_sqr().sqrt() <= 1e-9 * e[v].norm());
                    }
                }
            }
        }
        let e: Vec<CVector> = (0..3).map(|_| complex_normal_vector(2, &mut rng)).collect();
        assert!(matches!(private_precoders(&e), Err(Error::Constraint { .. })));
    }

    #[test]
    fn common_precoder_unit_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for dim in [1, 3, 7] {
            for _ in 0..50 {
                let c = common_precoder(dim, &mut rng).unwrap();
                assert!((c.norm() - 1.0).abs() < 1e-12);
            }
        }
        assert!(common_precoder(0, &mut rng).is_err());
    }

    #[test]
    fn common_precoder_is_isotropic() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let n = 100_000;
        let mut acc = CMatrix::zeros(3, 3);
        for _ in 0..n {
            let c = common_precoder(3, &mut rng).unwrap();
            acc += &c * c.adjoint();
        }
        acc /= C64::from(n as f64);
        for i in 0..3 {
            assert!((acc[(i, i)].re - 1.0 / 3.0).abs() < 0.02 / 3.0);
            for j in 0..3 {
                if i != j {
                    assert!(acc[(i, j)].norm_sqr().sqrt() < 0.02 / 3.0);
                }
            }
        }
    }
}
