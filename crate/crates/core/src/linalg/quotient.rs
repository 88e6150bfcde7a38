use super::Matrix;

/// A subquotient `K / B` of some ambient `ℚ^d`, where `B ⊆ K`.
///
/// `reps` holds representatives in `K` of a basis of the quotient and `proj`
/// sends any vector of `K` (in ambient coordinates) to quotient coordinates.
/// `proj` is only meaningful on `K`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub reps: Matrix,
    pub proj: Matrix,
}

impl Subquotient {
    /// `ℚ^d / span(image)`.
    pub fn cokernel(image: &Matrix) -> Subquotient {
        let d = image.rows();
        let b = image.column_basis();
        let c = b.complement();
        let m = b.hstack(&c);
        let inv = m.inverse().expect("basis completion is invertible");
        let proj = inv.block(b.cols(), 0, c.cols(), d);
        Subquotient { reps: c, proj }
    }

    /// `span(kernel) / span(image)`; `image` must lie in the span of `kernel`.
    pub fn new(kernel: &Matrix, image: &Matrix) -> Subquotient {
        let d = kernel.rows();
        debug_assert_eq!(image.rows(), d);
        let b = image.column_basis();
        let mut basis = b.clone();
        let mut rank = basis.cols();
        let mut reps = Matrix::zeros(d, 0);
        for j in 0..kernel.cols() {
            let col = kernel.block(0, j, d, 1);
            let candidate = basis.hstack(&col);
            if candidate.rank() > rank {
                basis = candidate;
                rank += 1;
                reps = reps.hstack(&col);
            }
        }
        // Left inverse of the full-column-rank basis, restricted to the rep rows.
        let gram = &basis.transpose() * &basis;
        let left = &gram.inverse().expect("independent columns") * &basis.transpose();
        let proj = left.block(b.cols(), 0, reps.cols(), d);
        Subquotient { reps, proj }
    }

    pub fn dim(&self) -> usize {
        self.reps.cols()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cokernel_projection_kills_image() {
        let img = Matrix::from_i64(&[&[1], &[1], &[0]]);
        let q = Subquotient::cokernel(&img);
        assert_eq!(q.dim(), 2);
        assert!((&q.proj * &img).is_zero());
        assert_eq!(&q.proj * &q.reps, Matrix::identity(2));
    }

    #[test]
    fn subquotient_of_kernel() {
        let k = Matrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0]]);
        let b = Matrix::from_i64(&[&[1], &[1], &[0]]);
        let q = Subquotient::new(&k, &b);
        assert_eq!(q.dim(), 1);
        assert!((&q.proj * &b).is_zero());
        assert_eq!(&q.proj * &q.reps, Matrix::identity(1));
    }
}
