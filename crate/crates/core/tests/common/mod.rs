//! Oracles shared by the integration tests.

/// P(U >= u) and P(U <= u) by listing every way of labelling `nb` of the
/// pooled values as sample b.
pub fn mann_whitney_brute_force(a: &[f64], b: &[f64]) -> (f64, f64) {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    let u_of = |mask: u32| {
        let mut u = 0.0;
        for j in (0..n).filter(|j| mask >> j & 1 == 1) {
            for i in (0..n).filter(|i| mask >> i & 1 == 0) {
                u += if pooled[j] > pooled[i] {
                    1.0
                } else if pooled[j] == pooled[i] {
                    0.5
                } else {
                    0.0
                };
            }
        }
        u
    };
    let observed = u_of(((1u32 << b.len()) - 1) << a.len());
    let (mut ge, mut le, mut total) = (0u64, 0u64, 0u64);
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != b.len() {
            continue;
        }
        let u = u_of(mask);
        total += 1;
        ge += (u >= observed - 1e-9) as u64;
        le += (u <= observed + 1e-9) as u64;
    }
    (ge as f64 / total as f64, le as f64 / total as f64)
}
