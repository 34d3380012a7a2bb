mod common;

use common::complex;
use proptest::prelude::*;
use schur_bp::psd::{psd_rank, range_consistency};
use schur_bp::{CMatrix, CVector};

fn with_singular_values(n: usize, k: usize, entries: Vec<schur_bp::Complex64>, sv: Vec<f64>) -> CMatrix {
    let a = CMatrix::from_vec(n, k, entries);
    // Replace the singular values of the random matrix by well-separated ones.
    let svd = a.svd(true, true);
    let (u, v_t) = (svd.u.unwrap(), svd.v_t.unwrap());
    let m = sv.len();
    let sigma = CMatrix::from_fn(m, m, |i, j| if i == j { sv[i].into() } else { 0.0.into() });
    u * sigma * v_t
}

fn matrix_case() -> impl Strategy<Value = (CMatrix, usize)> {
    (1usize..7, 1usize..7).prop_flat_map(|(n, k)| {
        let m = n.min(k);
        (
            proptest::collection::vec(complex(1.0), n * k),
            0..=m,
            proptest::collection::vec(0.1f64..3.0, m),
        )
            .prop_map(move |(entries, rank, mut sv)| {
                for (i, s) in sv.iter_mut().enumerate() {
                    if i >= rank {
                        *s = 0.0;
                    }
                }
                (with_singular_values(n, k, entries, sv), rank)
            })
    })
}

proptest! {
    #[test]
    fn gram_matrices_are_psd_with_expected_rank((a, rank) in matrix_case()) {
        let g = &a * a.adjoint();
        let r = psd_rank(&g, 1e-9).unwrap();
        prop_assert!(r.hermitian && r.psd);
        prop_assert_eq!(r.rank, rank);
    }

    #[test]
    fn images_are_in_the_range((a, _) in matrix_case(), v in proptest::collection::vec(complex(2.0), 6)) {
        let p = &a * a.adjoint();
        let v = CVector::from_iterator(p.ncols(), v.into_iter().cycle().take(p.ncols()));
        let b = &p * v;
        let r = range_consistency(&p, &b, 1e-9).unwrap();
        prop_assert!(r.consistent, "residual {}", r.residual);
    }
}
