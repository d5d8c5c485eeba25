//! Integer partitions, generated in reverse lexicographic order.

use crate::coloring::ColorPartition;

/// Every partition of `n` into positive parts, largest first: `(n)`,
/// `(n-1,1)`, ..., `(1,...,1)`.
pub fn integer_partitions(n: usize) -> Partitions {
    Partitions {
        current: if n == 0 { None } else { Some(vec![n]) },
    }
}

/// Partitions of `n` with at least `min_parts` and at most `max_parts` parts.
pub fn partitions_with_parts(
    n: usize,
    min_parts: usize,
    max_parts: usize,
) -> impl Iterator<Item = ColorPartition> {
    integer_partitions(n).filter(move |p| (min_parts..=max_parts).contains(&p.classes()))
}

pub struct Partitions {
    current: Option<Vec<usize>>,
}

impl Iterator for Partitions {
    type Item = ColorPartition;

    fn next(&mut self) -> Option<ColorPartition> {
        let current = self.current.take()?;
        let out = ColorPartition::new(current.clone());
        self.current = successor(current);
        Some(out)
    }
}

fn successor(mut parts: Vec<usize>) -> Option<Vec<usize>> {
    // strip trailing ones, decrement the last part > 1, refill greedily
    let mut ones = 0;
    while parts.last() == Some(&1) {
        parts.pop();
        ones += 1;
    }
    let last = parts.pop()?;
    let k = last - 1;
    let mut rest = ones + 1;
    parts.push(k);
    while rest > 0 {
        let take = rest.min(k);
        parts.push(take);
        rest -= take;
    }
    Some(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=15).map(|n| integer_partitions(n).count()).collect();
        assert_eq!(
            counts,
            vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176]
        );
        assert_eq!(integer_partitions(31).count(), 6842);
        assert_eq!(integer_partitions(0).count(), 0);
    }

    #[test]
    fn order_and_shape() {
        let all: Vec<Vec<usize>> = integer_partitions(5).map(|p| p.sizes().to_vec()).collect();
        assert_eq!(
            all,
            vec![
                vec![5],
                vec![4, 1],
                vec![3, 2],
                vec![3, 1, 1],
                vec![2, 2, 1],
                vec![2, 1, 1, 1],
                vec![1, 1, 1, 1, 1]
            ]
        );
    }

    #[test]
    fn part_count_filter() {
        let three: Vec<_> = partitions_with_parts(7, 3, 3)
            .map(|p| p.sizes().to_vec())
            .collect();
        assert_eq!(
            three,
            vec![vec![5, 1, 1], vec![4, 2, 1], vec![3, 3, 1], vec![3, 2, 2]]
        );
    }
}
