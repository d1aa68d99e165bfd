/// `(a_1, a_2, ...) -> (a_1, 0, a_2, 0, ...)`.
pub fn lifting(f: &[f64]) -> Vec<f64> {
    f.iter().flat_map(|&a| [a, 0.0]).collect()
}

/// `(a_1, a_2, ...) -> (a_1 - a_2, a_3 - a_4, ...)`; an odd-length input is padded with zero.
pub fn retraction(f: &[f64]) -> Vec<f64> {
    f.chunks(2).map(|c| c[0] - c.get(1).copied().unwrap_or(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqspace::SymSpace;

    #[test]
    fn examples() {
        assert_eq!(lifting(&[1.0, 2.0]), vec![1.0, 0.0, 2.0, 0.0]);
        assert_eq!(retraction(&[1.0, 0.0, 2.0, 0.0]), vec![1.0, 2.0]);
        assert_eq!(retraction(&[1.0, 2.0, 5.0]), vec![-1.0, 5.0]);
        let f = [1.0, -1.0, 1.0];
        let v1 = SymSpace::Variation;
        let l1 = SymSpace::lp(1.0);
        // every a_j is entered from zero and left back to zero
        assert_eq!(v1.norm(&lifting(&f)), 2.0 * l1.norm(&f));
        assert!(l1.norm(&retraction(&f)) <= v1.norm(&f));
        assert!(SymSpace::Sup.norm(&retraction(&f)) <= 2.0 * SymSpace::Sup.norm(&f));
    }
}
