//! Intersections of a lattice with linear and affine subspaces.

use num_bigint::BigInt;
use num_traits::Zero;

use super::basis::LatticeBasis;
use super::hnf::{self, ColumnEchelon};
use super::linalg;
use super::lll::{default_delta, lll_reduce};
use super::point::{Point, Subspace};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Integer constraints `M c = M y` cutting `{c : B c ∈ y + span(W)}` out of the
/// coefficient lattice `Z^d`.
pub struct AffineSlicer {
    basis: LatticeBasis,
    /// Rows spanning the orthogonal complement of `W` (rational, in `R^n`).
    perp: Vec<Vec<Rational>>,
    /// Per-row integer scaling so that `perp_i · B` is integral.
    row_scale: Vec<BigInt>,
    echelon: ColumnEchelon,
    sublattice: Option<LatticeBasis>,
    /// LLL-reduced copy of `sublattice` used to shorten coset representatives.
    reduced: Option<LatticeBasis>,
}

impl AffineSlicer {
    /// `spanning` may be any rational vectors (dependent or not, in `Λ` or not).
    pub fn new(basis: &LatticeBasis, spanning: &[Point]) -> Result<Self> {
        let n = basis.ambient_dim();
        let d = basis.rank();
        for s in spanning {
            s.check_dim(n)?;
        }
        let rows: Vec<Vec<Rational>> = spanning.iter().map(|p| p.coords().to_vec()).collect();
        let perp = if rows.is_empty() {
            (0..n).map(|i| Point::unit(n, i).into_coords()).collect()
        } else {
            linalg::nullspace(&rows, n)
        };
        let mut int_rows = Vec::with_capacity(perp.len());
        let mut row_scale = Vec::with_capacity(perp.len());
        for m in &perp {
            let m_pt = Point::new(m.clone());
            let entries: Vec<Rational> = basis.columns().iter().map(|b| m_pt.dot(b)).collect();
            let scale = rational::common_denominator(&entries);
            let scale_q = Rational::from_integer(scale.clone());
            int_rows.push(entries.iter().map(|e| (e * &scale_q).to_integer()).collect::<Vec<_>>());
            row_scale.push(scale);
        }
        let echelon = hnf::column_echelon(&int_rows, d);
        let kernel = hnf::integer_kernel(&int_rows, d);
        let sublattice = if kernel.is_empty() {
            None
        } else {
            // Canonical basis: row HNF of the kernel vectors in coefficient space.
            let canon = hnf::row_hnf(&kernel);
            let cols = canon.iter().map(|c| basis.point(c)).collect();
            Some(LatticeBasis::new(cols)?)
        };
        let reduced = sublattice.as_ref().map(|s| lll_reduce(s, &default_delta()));
        Ok(AffineSlicer {
            basis: basis.clone(),
            perp,
            row_scale,
            echelon,
            sublattice,
            reduced,
        })
    }

    /// `Λ ∩ span(W)`, or `None` when it is `{0}`.
    pub fn sublattice(&self) -> Option<&LatticeBasis> {
        self.sublattice.as_ref()
    }

    /// A lattice point in `y + span(W)`, if the coset meets `Λ`. The point is
    /// reduced modulo `Λ ∩ span(W)`, so its projection onto `span(W)` is short
    /// and the result depends only on the coset.
    pub fn coset_point(&self, y: &Point) -> Result<Option<Point>> {
        y.check_dim(self.basis.ambient_dim())?;
        let mut rhs = Vec::with_capacity(self.perp.len());
        for (m, s) in self.perp.iter().zip(&self.row_scale) {
            let v = Point::new(m.clone()).dot(y) * Rational::from_integer(s.clone());
            if !v.is_integer() {
                return Ok(None);
            }
            rhs.push(v.to_integer());
        }
        let Some(c) = self.echelon.solve(&rhs) else {
            return Ok(None);
        };
        let mut p = self.basis.point(&c);
        if let Some(red) = &self.reduced {
            let bt_p: Vec<Rational> = red.columns().iter().map(|b| b.dot(&p)).collect();
            for (row, b) in red.gram_inverse().iter().zip(red.columns()) {
                let coeff: Rational = row.iter().zip(&bt_p).map(|(g, x)| g * x).sum();
                let k = coeff.round();
                if !k.is_zero() {
                    p.add_scaled(&-k, b);
                }
            }
        }
        Ok(Some(p))
    }
}

/// `Λ ∩ span(spanning)` for arbitrary rational vectors; `None` if only `{0}`.
pub fn lattice_in_span(basis: &LatticeBasis, spanning: &[Point]) -> Result<Option<LatticeBasis>> {
    Ok(AffineSlicer::new(basis, spanning)?.sublattice)
}

/// Basis of the saturated sublattice `Λ ∩ W` of a lattice subspace `W`.
pub fn sublattice_in_subspace(basis: &LatticeBasis, w: &Subspace) -> Result<LatticeBasis> {
    for s in w.spanning() {
        s.check_dim(basis.ambient_dim())?;
        if !basis.contains(s)? {
            return Err(Error::NotLatticeSubspace);
        }
    }
    let sub = lattice_in_span(basis, w.spanning())?.ok_or(Error::NotLatticeSubspace)?;
    debug_assert_eq!(sub.rank(), w.dim());
    Ok(sub)
}
