//! Sparse LU through faer, single-threaded so results are reproducible.

use std::sync::Once;

use faer::prelude::*;
use faer::sparse::linalg::solvers::Lu;
use faer::sparse::{SparseColMat, Triplet};
use num_complex::Complex64;

use super::csr::CsrMatrix;
use crate::error::{Error, Result};

static SEQUENTIAL: Once = Once::new();

pub(crate) struct Factorization {
    lu: Lu<usize, Complex64>,
    n: usize,
}

impl Factorization {
    pub(crate) fn new(a: &CsrMatrix) -> Result<Self> {
        SEQUENTIAL.call_once(|| faer::set_global_parallelism(faer::Par::Seq));
        let n = a.nrows();
        let triplets: Vec<Triplet<usize, usize, Complex64>> = a.triplets().map(|(i, j, v)| Triplet::new(i, j, v)).collect();
        let m = SparseColMat::<usize, Complex64>::try_new_from_triplets(n, n, &triplets)
            .map_err(|e| Error::Singular(format!("{e:?}")))?;
        let lu = m.sp_lu().map_err(|e| Error::Singular(format!("{e:?}")))?;
        Ok(Self { lu, n })
    }

    pub(crate) fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let mut rhs = Mat::<Complex64>::from_fn(self.n, 1, |i, _| b[i]);
        self.lu.solve_in_place(rhs.as_mut());
        (0..self.n).map(|i| rhs[(i, 0)]).collect()
    }
}

pub(crate) fn solve(a: &CsrMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let x = Factorization::new(a)?.solve(b);
    if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Singular("factorization produced non-finite values".into()));
    }
    Ok(x)
}
