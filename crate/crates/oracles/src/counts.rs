//! Closed forms and independent recursions for sizes.

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `|Q^t_q|` for an injection `X → Y`: tensor words with at most `q`
/// letters from `Y ∖ X`.
pub fn q_closed_form(nx: usize, ny: usize, t: usize, q: usize) -> u128 {
    assert!(nx <= ny, "the map must be injective");
    (0..=q.min(t))
        .map(|j| binomial(t, j) * ((ny - nx) as u128).pow(j as u32) * (nx as u128).pow((t - j) as u32))
        .sum()
}

/// Elements of arity `n` of the free prop on `g` binary generators with
/// free symmetric action, all of one color: binary trees with ordered
/// children, leaves labelled `1..n`, vertices labelled by a generator.
pub fn binary_tree_count(n: usize, g: usize) -> u128 {
    let mut t = vec![0u128; n + 1];
    if n >= 1 {
        t[1] = 1;
    }
    for m in 2..=n {
        t[m] = g as u128 * (1..m).map(|j| binomial(m, j) * t[j] * t[m - j]).sum::<u128>();
    }
    t[n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_of_q() {
        assert_eq!(q_closed_form(2, 5, 3, 0), 8);
        assert_eq!(q_closed_form(2, 5, 3, 3), 125);
        assert_eq!(q_closed_form(0, 4, 3, 2), 0);
    }

    #[test]
    fn trees() {
        let one: Vec<u128> = (1..=5).map(|n| binary_tree_count(n, 1)).collect();
        assert_eq!(one, vec![1, 2, 12, 120, 1680]);
        assert_eq!(binary_tree_count(4, 2), 960);
    }
}
