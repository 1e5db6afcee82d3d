use std::fmt;

/// Multi-index `α = (α_1, ..., α_d)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(parts: Vec<u32>) -> Self {
        Self(parts)
    }

    pub fn zero(d: usize) -> Self {
        Self(vec![0; d])
    }

    /// `e_i` scaled by `k`.
    pub fn axis(d: usize, i: usize, k: u32) -> Self {
        let mut parts = vec![0; d];
        parts[i] = k;
        Self(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α|`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `α!`, exact while it stays below `2^53`.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&k| factorial(k)).product()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` if some component would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Self)
    }

    /// `Π k_i! / (k_i - a_i)!`: the coefficient picked up by `∂^a x^k`.
    pub fn falling(&self, a: &Self) -> f64 {
        self.0
            .iter()
            .zip(&a.0)
            .map(|(&k, &d)| if d > k { 0.0 } else { ((k - d + 1)..=k).map(f64::from).product() })
            .product()
    }

    pub fn has_odd_part(&self) -> bool {
        self.0.iter().any(|k| k % 2 == 1)
    }

    /// Splits a `2d` index into its first and second halves.
    pub fn split(&self) -> (Self, Self) {
        let d = self.0.len() / 2;
        (Self(self.0[..d].to_vec()), Self(self.0[d..].to_vec()))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

pub fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// All multi-indices of dimension `len` with `|α| = total`, in lexicographic order.
pub fn compositions(len: usize, total: u32) -> Vec<MultiIndex> {
    fn rec(len: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == len {
            prefix.push(total);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for k in (0..=total).rev() {
            prefix.push(k);
            rec(len, total - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if len == 0 {
        if total == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return out;
    }
    rec(len, total, &mut Vec::with_capacity(len), &mut out);
    out
}

/// All multi-indices of dimension `len` with `|α| <= total`.
pub fn indices_up_to(len: usize, total: u32) -> Vec<MultiIndex> {
    (0..=total).flat_map(|t| compositions(len, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts() {
        // C(t + len - 1, len - 1)
        assert_eq!(compositions(2, 4).len(), 5);
        assert_eq!(compositions(4, 3).len(), 20);
        assert_eq!(indices_up_to(2, 2).len(), 6);
        assert!(compositions(3, 5).iter().all(|a| a.order() == 5));
    }

    #[test]
    fn factorials_and_falling() {
        let a = MultiIndex::new(vec![3, 2]);
        assert_eq!(a.factorial(), 12.0);
        assert_eq!(a.falling(&MultiIndex::new(vec![2, 1])), 12.0);
        assert_eq!(a.falling(&MultiIndex::new(vec![4, 0])), 0.0);
        assert_eq!(factorial(18), 6_402_373_705_728_000.0);
    }
}
