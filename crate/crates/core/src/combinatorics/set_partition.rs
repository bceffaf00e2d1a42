use serde::{Deserialize, Serialize};

/// Set-partition of a finite set of labels, usually `{1..n}`.
///
/// Blocks are sorted internally and listed by their smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Normalizes block order; does not validate (see [`SetPartition::is_partition_of`]).
    pub fn from_blocks(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b.first().copied());
        Self { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// True when the blocks are non-empty, pairwise disjoint and cover `ground`.
    pub fn is_partition_of(&self, ground: &[usize]) -> bool {
        let mut seen: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        if self.blocks.iter().any(Vec::is_empty) {
            return false;
        }
        seen.sort_unstable();
        let mut want = ground.to_vec();
        want.sort_unstable();
        seen == want
    }

    /// No `a < b < c < d` with `a, c` in one block and `b, d` in another.
    pub fn is_noncrossing(&self) -> bool {
        let block_of = |x: usize| self.blocks.iter().position(|b| b.contains(&x));
        let elems: Vec<usize> = {
            let mut e: Vec<usize> = self.blocks.iter().flatten().copied().collect();
            e.sort_unstable();
            e
        };
        let labels: Vec<usize> = elems.iter().map(|&x| block_of(x).unwrap()).collect();
        let n = labels.len();
        for a in 0..n {
            for b in a + 1..n {
                if labels[b] == labels[a] {
                    continue;
                }
                for c in b + 1..n {
                    if labels[c] != labels[a] {
                        continue;
                    }
                    if (c + 1..n).any(|d| labels[d] == labels[b]) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// All set-partitions of `{1..n}`, generated from restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<SetPartition> {
    let ground: Vec<usize> = (1..=n).collect();
    set_partitions_of(&ground)
}

/// All set-partitions of the given labels.
pub fn set_partitions_of(items: &[usize]) -> Vec<SetPartition> {
    let mut out = Vec::new();
    if items.is_empty() {
        out.push(SetPartition { blocks: Vec::new() });
        return out;
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    grow(items, 0, &mut blocks, &mut out);
    out
}

fn grow(items: &[usize], i: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<SetPartition>) {
    if i == items.len() {
        out.push(SetPartition::from_blocks(blocks.clone()));
        return;
    }
    for b in 0..blocks.len() {
        blocks[b].push(items[i]);
        grow(items, i + 1, blocks, out);
        blocks[b].pop();
    }
    blocks.push(vec![items[i]]);
    grow(items, i + 1, blocks, out);
    blocks.pop();
}

pub fn noncrossing_partitions(n: usize) -> Vec<SetPartition> {
    set_partitions(n)
        .into_iter()
        .filter(SetPartition::is_noncrossing)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bell numbers from the Bell triangle.
    fn bell(n: usize) -> usize {
        let mut row = vec![1usize];
        for _ in 1..n {
            let mut next = vec![*row.last().unwrap()];
            for &x in &row {
                let v = next.last().unwrap() + x;
                next.push(v);
            }
            row = next;
        }
        *row.last().unwrap()
    }

    fn catalan(n: usize) -> usize {
        (0..n).fold(1usize, |c, k| c * 2 * (2 * k + 1) / (k + 2))
    }

    #[test]
    fn small_counts() {
        assert_eq!(set_partitions(1).len(), 1);
        assert_eq!(set_partitions(3).len(), 5);
        assert_eq!(set_partitions(5).len(), 52);
        assert_eq!(noncrossing_partitions(1).len(), 1);
        assert_eq!(noncrossing_partitions(3).len(), 5);
        assert_eq!(noncrossing_partitions(4).len(), 14);
    }

    #[test]
    fn bell_and_catalan_up_to_ten() {
        for n in 1..=10 {
            let all = set_partitions(n);
            assert_eq!(all.len(), bell(n), "Bell({n})");
            let ground: Vec<usize> = (1..=n).collect();
            assert!(all.iter().all(|p| p.is_partition_of(&ground)));
            let nc = all.iter().filter(|p| p.is_noncrossing()).count();
            assert_eq!(nc, catalan(n), "Catalan({n})");
        }
    }

    #[test]
    fn crossing_detected() {
        let crossing = SetPartition::from_blocks(vec![vec![1, 3], vec![2, 4]]);
        assert!(!crossing.is_noncrossing());
        let nested = SetPartition::from_blocks(vec![vec![1, 4], vec![2, 3]]);
        assert!(nested.is_noncrossing());
    }

    #[test]
    fn validator_rejects_bad_families() {
        let ground = [1, 2, 3];
        assert!(!SetPartition::from_blocks(vec![vec![1, 2], vec![2, 3]]).is_partition_of(&ground));
        assert!(!SetPartition::from_blocks(vec![vec![1, 2]]).is_partition_of(&ground));
        assert!(!SetPartition::from_blocks(vec![vec![1, 2, 3], vec![]]).is_partition_of(&ground));
    }

    #[test]
    fn arbitrary_labels() {
        let ps = set_partitions_of(&[2, 5]);
        assert_eq!(ps.len(), 2);
        assert!(ps.iter().all(|p| p.is_partition_of(&[2, 5])));
        assert_eq!(set_partitions_of(&[]).len(), 1);
    }
}
