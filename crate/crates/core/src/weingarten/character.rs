//! Symmetric-group characters by the Murnaghan-Nakayama rule.

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::partition::{CycleType, Partition, YoungDiagram};

/// Memo table for `χ^λ(μ)`, keyed by the remaining shape and the number of
/// cycle parts already consumed.
#[derive(Debug, Default)]
pub struct CharacterTable {
    memo: HashMap<(Vec<usize>, Vec<usize>), i64>,
}

impl CharacterTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn chi(&mut self, lambda: &YoungDiagram, mu: &CycleType) -> Result<i64> {
        if lambda.size() != mu.size() {
            return Err(Error::SizeMismatch {
                left: lambda.size(),
                right: mu.size(),
            });
        }
        Ok(self.chi_rec(lambda.parts().to_vec(), mu.parts()))
    }

    fn chi_rec(&mut self, shape: Vec<usize>, mu: &[usize]) -> i64 {
        let Some((&r, rest)) = mu.split_first() else {
            return 1;
        };
        let key = (shape, mu.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let shape = &key.0;

        // Beta numbers β_i = λ_i + (L - 1 - i) are strictly decreasing. A rim
        // hook of length r is a move β -> β - r onto a free position; its sign
        // is (-1)^(number of β strictly between).
        let len = shape.len();
        let beta: Vec<usize> = shape.iter().enumerate().map(|(i, &l)| l + (len - 1 - i)).collect();
        let mut total = 0;
        for (idx, &b) in beta.iter().enumerate() {
            if b < r || beta.contains(&(b - r)) {
                continue;
            }
            let target = b - r;
            let crossed = beta.iter().filter(|&&c| c > target && c < b).count();
            let sign = if crossed % 2 == 0 { 1 } else { -1 };
            let mut moved = beta.clone();
            moved[idx] = target;
            moved.sort_unstable_by(|a, b| b.cmp(a));
            let reduced: Vec<usize> = moved
                .iter()
                .enumerate()
                .map(|(i, &m)| m - (len - 1 - i))
                .filter(|&p| p > 0)
                .collect();
            total += sign * self.chi_rec(reduced, rest);
        }
        self.memo.insert(key, total);
        total
    }
}

/// `χ^λ(μ)` with a fresh memo table.
pub fn character_chi(lambda: &YoungDiagram, mu: &CycleType) -> Result<i64> {
    CharacterTable::new().chi(lambda, mu)
}

/// `χ^λ(1)`, the dimension of the irreducible representation.
pub fn irrep_dimension(lambda: &YoungDiagram) -> i64 {
    let identity = Partition::from_unsorted(vec![1; lambda.size()]);
    CharacterTable::new()
        .chi(lambda, &identity)
        .expect("sizes agree by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weingarten::partition::partitions;
    use crate::weingarten::permutation::Permutation;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_values() {
        for mu in partitions(4) {
            assert_eq!(character_chi(&part(&[4]), &mu).unwrap(), 1);
        }
        assert_eq!(character_chi(&part(&[1, 1]), &part(&[2])).unwrap(), -1);
        assert_eq!(character_chi(&part(&[2, 1]), &part(&[1, 1, 1])).unwrap(), 2);
        assert_eq!(character_chi(&part(&[2, 1]), &part(&[3])).unwrap(), -1);
        assert_eq!(character_chi(&part(&[2, 1]), &part(&[2, 1])).unwrap(), 0);
        assert!(matches!(
            character_chi(&part(&[2, 1]), &part(&[2])),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn dimension_matches_hook_length_formula() {
        for p in 1..=7 {
            let factorial: i64 = (1..=p as i64).product();
            for lambda in partitions(p) {
                let hooks: i64 = lambda.cells().map(|(i, j)| lambda.hook(i, j) as i64).product();
                assert_eq!(irrep_dimension(&lambda), factorial / hooks, "{lambda}");
            }
        }
    }

    #[test]
    fn sign_character_and_conjugation() {
        // χ^{λ'}(σ) = sgn(σ) χ^λ(σ).
        for p in 1..=6 {
            for mu in partitions(p) {
                let sign = if (p - mu.rows()) % 2 == 0 { 1 } else { -1 };
                assert_eq!(character_chi(&part(&vec![1; p]), &mu).unwrap(), sign);
                for lambda in partitions(p) {
                    assert_eq!(
                        character_chi(&lambda.conjugate(), &mu).unwrap(),
                        sign * character_chi(&lambda, &mu).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn column_orthogonality() {
        // Σ_λ χ^λ(μ) χ^λ(ν) = δ_{μν} |centralizer(μ)|.
        for p in 1..=6 {
            let perms = Permutation::all(p);
            for mu in partitions(p) {
                let class_size = perms.iter().filter(|s| s.cycle_type() == mu).count() as i64;
                let group: i64 = (1..=p as i64).product();
                for nu in partitions(p) {
                    let mut table = CharacterTable::new();
                    let sum: i64 = partitions(p)
                        .iter()
                        .map(|l| table.chi(l, &mu).unwrap() * table.chi(l, &nu).unwrap())
                        .sum();
                    let expected = if mu == nu { group / class_size } else { 0 };
                    assert_eq!(sum, expected, "p={p} mu={mu} nu={nu}");
                }
            }
        }
    }
}
