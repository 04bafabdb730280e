use proptest::prelude::*;
use slr_core::clustering::{cluster_two, fiedler_vector, ClusterMethod};
use slr_core::VariationMatrix;

/// Every 2-partition (group containing index 0 listed first) whose largest
/// within-group entry is below its smallest between-group entry.
fn brute_force_block_splits(values: &[f64], m: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut found = Vec::new();
    for mask in 0u32..(1 << m) {
        if mask & 1 == 0 || mask == (1 << m) - 1 {
            continue;
        }
        let (a, b): (Vec<usize>, Vec<usize>) = (0..m).partition(|&i| mask >> i & 1 == 1);
        let mut within = 0.0f64;
        let mut between = f64::INFINITY;
        for i in 0..m {
            for j in (i + 1)..m {
                let same = (mask >> i & 1) == (mask >> j & 1);
                let v = values[i * m + j];
                if same {
                    within = within.max(v);
                } else {
                    between = between.min(v);
                }
            }
        }
        if within < between {
            found.push((a, b));
        }
    }
    found
}

fn block_matrix(labels: &[bool], within: &[f64], between: &[f64]) -> Vec<f64> {
    let m = labels.len();
    let mut values = vec![0.0; m * m];
    let mut k = 0;
    for i in 0..m {
        for j in (i + 1)..m {
            let v = if labels[i] == labels[j] {
                within[k % within.len()]
            } else {
                between[k % between.len()]
            };
            values[i * m + j] = v;
            values[j * m + i] = v;
            k += 1;
        }
    }
    values
}

fn block_case() -> impl Strategy<Value = (Vec<bool>, Vec<f64>, Vec<f64>)> {
    (2usize..=10).prop_flat_map(|m| {
        (
            prop::collection::vec(any::<bool>(), m).prop_filter("two blocks", |l| {
                l.iter().any(|&b| b) && l.iter().any(|&b| !b)
            }),
            prop::collection::vec(0.0f64..0.3, 45),
            prop::collection::vec(0.7f64..1.0, 45),
        )
    })
}

proptest! {
    #[test]
    fn block_structure_is_recovered((labels, within, between) in block_case()) {
        let m = labels.len();
        let values = block_matrix(&labels, &within, &between);
        let splits = brute_force_block_splits(&values, m);
        prop_assert_eq!(splits.len(), 1);
        let (ref a, ref b) = splits[0];
        let vm = VariationMatrix::from_values(values, (0..m).collect()).unwrap();
        for method in [ClusterMethod::Hierarchical, ClusterMethod::Spectral] {
            let r = cluster_two(&vm, method).unwrap();
            prop_assert_eq!(&r.group_a, a, "{}", method);
            prop_assert_eq!(&r.group_b, b, "{}", method);
        }
    }

    #[test]
    fn fiedler_is_an_eigenvector_orthogonal_to_ones(
        m in 2usize..12,
        entries in prop::collection::vec(0.0f64..1.0, 66),
    ) {
        let mut values = vec![0.0; m * m];
        let mut k = 0;
        for i in 0..m {
            for j in (i + 1)..m {
                values[i * m + j] = entries[k];
                values[j * m + i] = entries[k];
                k += 1;
            }
        }
        let vm = VariationMatrix::from_values(values, (0..m).collect()).unwrap();
        let f = fiedler_vector(&vm);
        let ones: f64 = f.vector.iter().sum();
        prop_assert!(ones.abs() < 1e-8);
        let residual: f64 = (0..m)
            .map(|i| {
                let lv: f64 = (0..m).map(|j| f.laplacian[i * m + j] * f.vector[j]).sum();
                (lv - f.value * f.vector[i]).powi(2)
            })
            .sum::<f64>()
            .sqrt();
        prop_assert!(residual < 1e-8, "residual {}", residual);
        // groups are always nonempty
        for method in [ClusterMethod::Hierarchical, ClusterMethod::Spectral] {
            let r = cluster_two(&vm, method).unwrap();
            prop_assert!(!r.group_a.is_empty() && !r.group_b.is_empty());
            prop_assert_eq!(r.group_a.len() + r.group_b.len(), m);
        }
    }

    #[test]
    fn relabeling_variables_relabels_the_split(
        entries in prop::collection::vec(0.01f64..1.0, 28),
        shift in 0usize..8,
    ) {
        let m = 8;
        let mut values = vec![0.0; m * m];
        let mut k = 0;
        for i in 0..m {
            for j in (i + 1)..m {
                values[i * m + j] = entries[k];
                values[j * m + i] = entries[k];
                k += 1;
            }
        }
        // rotate positions and carry the original indices along
        let perm: Vec<usize> = (0..m).map(|i| (i + shift) % m).collect();
        let mut permuted = vec![0.0; m * m];
        for r in 0..m {
            for c in 0..m {
                permuted[r * m + c] = values[perm[r] * m + perm[c]];
            }
        }
        let base = VariationMatrix::from_values(values, (0..m).collect()).unwrap();
        let moved = VariationMatrix::from_values(permuted, perm.clone()).unwrap();
        for method in [ClusterMethod::Hierarchical, ClusterMethod::Spectral] {
            let r1 = cluster_two(&base, method).unwrap();
            let r2 = cluster_two(&moved, method).unwrap();
            let mut s1 = [r1.group_a.clone(), r1.group_b.clone()];
            let mut s2 = [r2.group_a.clone(), r2.group_b.clone()];
            s1.sort();
            s2.sort();
            prop_assert_eq!(s1, s2, "{}", method);
        }
    }
}

#[test]
fn population_block_example() {
    // within 2 sigma_eps^2 = 0.02, between (2/3)^2/12 + 0.02 ~ 0.057
    let labels = [true, true, false, false];
    let values = block_matrix(&labels, &[0.02], &[0.057]);
    assert_eq!(
        brute_force_block_splits(&values, 4),
        vec![(vec![0, 1], vec![2, 3])]
    );
    let vm = VariationMatrix::from_values(values, vec![0, 1, 2, 3]).unwrap();
    for method in [ClusterMethod::Hierarchical, ClusterMethod::Spectral] {
        let r = cluster_two(&vm, method).unwrap();
        assert_eq!((r.group_a, r.group_b), (vec![0, 1], vec![2, 3]));
    }
}
