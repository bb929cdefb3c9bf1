//! Numerical semigroups and the purely combinatorial type sequence of a
//! residually rational ring `k[[S]]`.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::ring::SemigroupData;

/// The numerical semigroup generated by `gens`.
pub fn semigroup_from_generators(gens: &[usize]) -> Result<SemigroupData> {
    if gens.is_empty() || gens.contains(&0) {
        return Err(Error::InvalidSemigroup("generators must be positive".into()));
    }
    let g = gens.iter().fold(0usize, |acc, &x| acc.gcd(&x));
    if g != 1 {
        return Err(Error::InvalidSemigroup(format!("generators have gcd {g}, so the complement is infinite")));
    }
    let m = *gens.iter().min().unwrap();
    let mut member = vec![true];
    let mut run = 0;
    // Once `m` consecutive integers are members, every larger one is.
    let mut x = 0;
    while run < m {
        x += 1;
        let is = gens.iter().any(|&a| a <= x && member[x - a]);
        member.push(is);
        run = if is { run + 1 } else { 0 };
    }
    let mut c = member.len() - m;
    while c > 0 && member[c - 1] {
        c -= 1;
    }
    Ok(SemigroupData::from_values(&member[..c], c))
}

fn validate(s: &SemigroupData) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidSemigroup(m.to_string()));
    if s.s_list.first() != Some(&0) {
        return bad("0 must be an element");
    }
    if s.s_list.windows(2).any(|w| w[0] >= w[1]) {
        return bad("elements must be strictly increasing");
    }
    if s.s_list.get(s.r) != Some(&s.c) {
        return bad("s_r must equal the conductor c");
    }
    let small = &s.s_list[..=s.r];
    for &a in small {
        for &b in small {
            if !s.contains(a + b) {
                return bad(&format!("{a} + {b} is not an element"));
            }
        }
    }
    let expected_gaps: Vec<usize> = (0..s.c).filter(|&x| !s.contains(x)).collect();
    if s.gaps != expected_gaps {
        return bad("gaps are not the complement of the elements");
    }
    Ok(())
}

/// `t_i = #(A_i \ A_{i-1})` with `S_i = {x ∈ S | x ≥ s_i}` and
/// `A_i = {x ∈ ℤ | x + S_i ⊆ S}`, for `1 ≤ i ≤ r`.
///
/// Integers are searched in `[-(c+1), 2c]`: any `x ∈ A_i \ A_{i-1}` has
/// `x ≥ -s_i` (as `x + s_i ≥ 0`) and `x < c` (as `A_{i-1} ⊇ S ⊇ [c, ∞)`).
pub fn semigroup_ts_oracle(s: &SemigroupData) -> Result<Vec<usize>> {
    validate(s)?;
    let c = s.c as i64;
    let member = |x: i64| x >= 0 && s.contains(x as usize);
    let elements: Vec<i64> = s.s_list[..=s.r].iter().map(|&x| x as i64).collect();
    let window: Vec<i64> = (-(c + 1)..=2 * c).collect();
    // x + y for y ≥ 2c + 2 is ≥ c on the whole window, so larger y need no check.
    let in_a = |x: i64, si: i64| {
        (si..2 * c + 2)
            .filter(|&y| member(y))
            .all(|y| member(x + y))
    };
    let mut prev: Vec<bool> = window.iter().map(|&x| in_a(x, 0)).collect();
    let mut out = Vec::with_capacity(s.r);
    for &si in &elements[1..] {
        let cur: Vec<bool> = window.iter().map(|&x| in_a(x, si)).collect();
        let fresh = cur.iter().zip(&prev).filter(|(now, before)| **now && !**before).count();
        out.push(fresh);
        prev = cur;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semigroup_generation() {
        let s = semigroup_from_generators(&[4, 6, 11, 13]).unwrap();
        assert_eq!(s.s_list, vec![0, 4, 6, 8, 10]);
        assert_eq!(s.gaps, vec![1, 2, 3, 5, 7, 9]);
        assert_eq!((s.c, s.r, s.l), (10, 4, 0));
        let cusp = semigroup_from_generators(&[2, 3]).unwrap();
        assert_eq!(cusp.s_list, vec![0, 2]);
        let all = semigroup_from_generators(&[1]).unwrap();
        assert_eq!(all.s_list, vec![0]);
    }

    #[test]
    fn rejects_non_numerical() {
        assert!(semigroup_from_generators(&[4, 6]).is_err());
        assert!(semigroup_from_generators(&[]).is_err());
        assert!(semigroup_from_generators(&[0, 1]).is_err());
        let mut broken = semigroup_from_generators(&[3, 4, 5]).unwrap();
        broken.s_list = vec![0, 2, 3];
        broken.r = 2;
        assert!(semigroup_ts_oracle(&broken).is_err());
    }

    #[test]
    fn oracle_values() {
        let ts = |g: &[usize]| semigroup_ts_oracle(&semigroup_from_generators(g).unwrap()).unwrap();
        assert_eq!(ts(&[2, 3]), vec![1]);
        assert_eq!(ts(&[3, 4, 5]), vec![2]);
        assert_eq!(ts(&[4, 6, 11, 13]), vec![3, 1, 1, 1]);
        assert_eq!(ts(&[1]), Vec::<usize>::new());
    }

    #[test]
    fn symmetric_semigroups_have_constant_one_sequence() {
        // ⟨3,5⟩ is symmetric.
        let ts = semigroup_ts_oracle(&semigroup_from_generators(&[3, 5]).unwrap()).unwrap();
        assert!(ts.iter().all(|&t| t == 1));
        let sum: usize = ts.iter().sum();
        // Σ t_i equals the number of gaps.
        assert_eq!(sum, semigroup_from_generators(&[3, 5]).unwrap().gaps.len());
    }
}
