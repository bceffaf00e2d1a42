use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::factorial;
use crate::error::{Error, Result};

/// Integer partition, parts stored weakly decreasing.
///
/// The derived order is lexicographic on the part list; [`partitions_of`] lists
/// partitions in the reverse of it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Fails unless the parts are positive and weakly decreasing.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidInput(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!("parts not weakly decreasing: {parts:?}")));
        }
        Ok(Self(parts))
    }

    /// Sorts the parts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    /// One row of length `k` (`k > 0`).
    pub fn row(k: u32) -> Self {
        Self::from_unsorted(vec![k])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn into_parts(self) -> Vec<u32> {
        self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn length(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiplicity(&self, i: u32) -> usize {
        self.0.iter().filter(|&&p| p == i).count()
    }

    /// `prod_i i^{m_i} m_i!`.
    pub fn z_factor(&self) -> BigInt {
        let mut acc = BigInt::one();
        let mut k = 0;
        while k < self.0.len() {
            let part = self.0[k];
            let run = self.0[k..].iter().take_while(|&&p| p == part).count();
            acc *= BigInt::from(part).pow(run as u32) * factorial(run as u64);
            k += run;
        }
        acc
    }

    pub fn concat(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Self::from_unsorted(parts)
    }

    /// Concatenation of a whole family.
    pub fn concat_all<'a>(items: impl IntoIterator<Item = &'a Partition>) -> Partition {
        Self::from_unsorted(items.into_iter().flat_map(|p| p.0.iter().copied()).collect())
    }

    /// `self` with `k` extra parts equal to 1.
    pub fn with_ones(&self, k: usize) -> Partition {
        let mut parts = self.0.clone();
        parts.extend(std::iter::repeat_n(1, k));
        Self(parts)
    }

    /// Dominance order; `None` for incomparable partitions or different sizes.
    pub fn dominance_cmp(&self, other: &Partition) -> Option<Ordering> {
        if self.size() != other.size() {
            return None;
        }
        let (mut s, mut t) = (0i64, 0i64);
        let (mut ge, mut le) = (true, true);
        for i in 0..self.length().max(other.length()) {
            s += *self.0.get(i).unwrap_or(&0) as i64;
            t += *other.0.get(i).unwrap_or(&0) as i64;
            ge &= s >= t;
            le &= s <= t;
        }
        match (ge, le) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Greater),
            (false, true) => Some(Ordering::Less),
            _ => None,
        }
    }

    pub fn dominates(&self, other: &Partition) -> bool {
        matches!(self.dominance_cmp(other), Some(Ordering::Greater | Ordering::Equal))
    }

    /// Boxes as `(column, row)`, both 1-based, row by row.
    pub fn boxes(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |x| (x, i as u32 + 1)))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `[3,2]`, `[]`, and also bare `3,2`; parts may come in any order.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim();
        let inner = inner
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .unwrap_or(inner)
            .trim();
        if inner.is_empty() {
            return Ok(Self::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .ok()
                    .filter(|&v| v > 0)
                    .ok_or_else(|| Error::Parse(format!("bad partition {s:?}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(Self::from_unsorted(parts))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All partitions of `n`, reverse-lexicographic: `[n]` first, `[1^n]` last.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(n as u32, n as u32, &mut current, &mut out);
    out
}

fn fill(rest: u32, max: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition(current.clone()));
        return;
    }
    for part in (1..=rest.min(max)).rev() {
        current.push(part);
        fill(rest - part, part, current, out);
        current.pop();
    }
}

/// All partitions of every size `0..=n`, grouped by increasing size.
pub fn partitions_up_to(n: usize) -> Vec<Partition> {
    (0..=n).flat_map(partitions_of).collect()
}

/// Partitions of `n` with at most `rows` parts.
pub fn partitions_with_rows(n: usize, rows: usize) -> Vec<Partition> {
    partitions_of(n).into_iter().filter(|p| p.length() <= rows).collect()
}
