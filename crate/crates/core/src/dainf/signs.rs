//! Parities of the signs in the derived A-infinity relations. Every function
//! returns `true` when the sign is `-1`. Indices `t` in the sums are 1-based.

/// `rq + t + pj`, the sign of `m_{ij}(1^{⊗r} ⊗ m_{pq} ⊗ 1^{⊗t})`.
pub fn relation(r: usize, q: usize, t: usize, p: usize, j: usize) -> bool {
    (r * q + t + p * j) % 2 == 1
}

/// `Σ_t (p_t+q_t)(l+t) + q_t Σ_{w>t} (p_w+q_w)` for `l = pq.len()`, the sign
/// of `f_{il}(g_{p_1q_1} ⊗ ... ⊗ g_{p_lq_l})` in a composite.
pub fn composition(pq: &[(usize, usize)]) -> bool {
    let l = pq.len();
    let mut acc = 0;
    let mut later: usize = pq.iter().map(|&(p, q)| p + q).sum();
    for (k, &(p, q)) in pq.iter().enumerate() {
        let t = k + 1;
        later -= p + q;
        acc += (p + q) * (l + t) + q * later;
    }
    acc % 2 == 1
}

/// `u + composition(pq)`, the sign of `m^B_{il}(f_{p_1q_1} ⊗ ...)` in `(B_{uv})`.
pub fn morphism(u: usize, pq: &[(usize, usize)]) -> bool {
    (u % 2 == 1) ^ composition(pq)
}

/// `α` of the explicit homotopy relations: `composition(pq)` plus
/// `(r-1)(l + 1 + s + Σ_{u≤s} q_u)`, where the `h` factor sits at slot `s+1`.
pub fn homotopy_alpha(pq: &[(usize, usize)], s: usize, r: usize) -> bool {
    let l = pq.len();
    let head: usize = pq[..s].iter().map(|&(_, q)| q).sum();
    let extra = (r + 1) * (l + 1 + s + head);
    composition(pq) ^ (extra % 2 == 1)
}

/// `β = sq + t + pl + r` for `h_{il}(1^{⊗s} ⊗ m_{pq} ⊗ 1^{⊗t})`.
pub fn homotopy_beta(s: usize, q: usize, t: usize, p: usize, l: usize, r: usize) -> bool {
    (s * q + t + p * l + r) % 2 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Literal transcription, with nothing folded mod 2.
    fn composition_literal(pq: &[(usize, usize)]) -> i64 {
        let l = pq.len() as i64;
        let mut s = 0i64;
        for t in 1..=pq.len() {
            let (p, q) = (pq[t - 1].0 as i64, pq[t - 1].1 as i64);
            s += (p + q) * (l + t as i64);
            let tail: i64 = pq[t..].iter().map(|&(p, q)| (p + q) as i64).sum();
            s += q * tail;
        }
        s
    }

    #[test]
    fn relation_sign_examples() {
        // m_{02}(m_{02} ⊗ 1): r=0, q=2, t=1, p=0, j=2 → -1
        assert!(relation(0, 2, 1, 0, 2));
        // m_{02}(1 ⊗ m_{02}) → +1
        assert!(!relation(1, 2, 0, 0, 2));
        // m_{i1} m_{p1}: sign (-1)^p
        assert!(relation(0, 1, 0, 1, 1));
        assert!(!relation(0, 1, 0, 2, 1));
    }

    #[test]
    fn composition_matches_literal_formula() {
        let cases: Vec<Vec<(usize, usize)>> = vec![
            vec![(0, 1)],
            vec![(1, 1)],
            vec![(0, 1), (0, 1)],
            vec![(1, 2), (0, 1)],
            vec![(2, 1), (1, 3), (0, 2)],
            vec![(0, 2), (1, 1), (1, 1), (3, 2)],
        ];
        for pq in cases {
            assert_eq!(composition(&pq), composition_literal(&pq) % 2 == 1, "{pq:?}");
        }
    }

    #[test]
    fn hand_computed_values() {
        // l = 2: (p1+q1)(3) + (p2+q2)(4) + q1(p2+q2)
        // (1,2),(0,1): 3·3 + 0 + 2·1 = 11 → odd
        assert!(composition(&[(1, 2), (0, 1)]));
        // (0,1),(0,1): 3 + 4 + 1 = 8 → even
        assert!(!composition(&[(0, 1), (0, 1)]));
        // arity one: (p+q)·2 is always even
        assert!(!composition(&[(3, 1)]));
        assert!(morphism(1, &[(3, 1)]));
    }

    #[test]
    fn homotopy_signs_at_arity_one() {
        // α vanishes for l = 1, s = 0 and any r
        for r in 0..4 {
            for p in 0..4 {
                assert!(!homotopy_alpha(&[(p, 1)], 0, r));
            }
        }
        // β = p + r when s = t = 0, q = l = 1
        assert_eq!(homotopy_beta(0, 1, 0, 1, 1, 0), true);
        assert_eq!(homotopy_beta(0, 1, 0, 1, 1, 1), false);
        // (r-1)(l+1+s+q_1) with r = 0, l = 2, s = 1, q_1 = 1: 5·(-1) → odd extra
        let base = composition(&[(0, 1), (0, 1)]);
        assert_eq!(homotopy_alpha(&[(0, 1), (0, 1)], 1, 0), !base);
    }
}
