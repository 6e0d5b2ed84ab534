use proptest::prelude::*;
use tribracket_core::linalg::smith_diagonal;
use tribracket_core::ring::is_prime;
use tribracket_core::{KernelBackend, ModMatrix};

fn brute_force_kernel(m: &ModMatrix) -> u128 {
    let (n, cols) = (m.modulus(), m.cols());
    let mut v = vec![0u64; cols];
    let mut count = 0;
    loop {
        let zero = (0..m.rows()).all(|i| (0..cols).map(|j| m.get(i, j) * v[j]).sum::<u64>() % n == 0);
        count += u128::from(zero);
        let mut k = 0;
        while k < cols {
            v[k] += 1;
            if v[k] < n {
                break;
            }
            v[k] = 0;
            k += 1;
        }
        if k == cols {
            return count;
        }
    }
}

fn matrix(max_rows: usize, max_cols: usize, moduli: Vec<u64>) -> impl Strategy<Value = ModMatrix> {
    (prop::sample::select(moduli), 0..=max_rows, 1..=max_cols).prop_flat_map(|(n, r, c)| {
        prop::collection::vec(0..n as i64, r * c).prop_map(move |e| {
            let rows: Vec<&[i64]> = e.chunks(c.max(1)).collect();
            ModMatrix::from_rows(n, c, &rows).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn kernel_matches_enumeration(m in matrix(4, 4, (2..=9).collect())) {
        let expected = brute_force_kernel(&m);
        prop_assert_eq!(m.kernel_size_with(KernelBackend::Howell), expected);
        prop_assert_eq!(m.kernel_size_with(KernelBackend::Smith), expected);
    }

    #[test]
    fn prime_kernel_is_power_of_rank(m in matrix(5, 6, vec![2, 3, 5, 7])) {
        prop_assume!(is_prime(m.modulus()));
        let rank = m.kernel_rank().unwrap();
        prop_assert_eq!(m.kernel_size(), (m.modulus() as u128).pow(rank as u32));
    }

    #[test]
    fn row_reduce_is_idempotent_and_keeps_row_space(m in matrix(5, 5, vec![4, 6, 8, 9, 12])) {
        let r = m.row_reduce();
        prop_assert_eq!(r.row_reduce(), r.clone());
        for i in 0..m.rows() {
            prop_assert!(r.row_space_contains(m.row(i)));
        }
        for i in 0..r.rows() {
            prop_assert!(m.row_space_contains(r.row(i)));
        }
        prop_assert_eq!(r.kernel_size(), m.kernel_size());
    }
}

#[test]
fn smith_diagonal_divisibility_chain() {
    let d = smith_diagonal(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
    assert_eq!(d, [2, 6, 12]);
}

#[test]
fn composite_rank_is_rejected() {
    let m = ModMatrix::identity(8, 3).unwrap();
    assert!(m.kernel_rank().is_err());
    assert_eq!(m.kernel_size(), 1);
}
