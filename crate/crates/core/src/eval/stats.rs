use crate::{Error, Result};

fn check_pair(m: &[f64], h: &[f64], min: usize) -> Result<()> {
    if m.len() != h.len() {
        return Err(Error::DimensionMismatch {
            expected: m.len(),
            actual: h.len(),
        });
    }
    if m.len() < min {
        return Err(Error::Statistic(format!(
            "need at least {min} paired values, got {}",
            m.len()
        )));
    }
    if m.iter().chain(h).any(|x| !x.is_finite()) {
        return Err(Error::Statistic("non-finite value".into()));
    }
    Ok(())
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Pearson's linear correlation coefficient.
pub fn plcc(m: &[f64], h: &[f64]) -> Result<f64> {
    check_pair(m, h, 3)?;
    let (mm, mh) = (mean(m), mean(h));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in m.iter().zip(h) {
        let (dx, dy) = (x - mm, y - mh);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Statistic("zero variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks; tied values share the average of their positions.
pub fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut r = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i + 1;
        while j < idx.len() && x[idx[j]] == x[idx[i]] {
            j += 1;
        }
        let avg = (i + j + 1) as f64 / 2.0;
        for &k in &idx[i..j] {
            r[k] = avg;
        }
        i = j;
    }
    r
}

/// Spearman's rank correlation, `1 - 6 sum d^2 / (n (n^2 - 1))`, with
/// average ranks for ties.
pub fn srocc(m: &[f64], h: &[f64]) -> Result<f64> {
    check_pair(m, h, 3)?;
    let (rm, rh) = (ranks(m), ranks(h));
    let n = m.len() as f64;
    let d2: f64 = rm.iter().zip(&rh).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(1.0 - 6.0 * d2 / (n * (n * n - 1.0)))
}

/// Kendall's tau-a, `(concordant - discordant) / (n (n - 1) / 2)`, in
/// `O(n log n)` by merge-sort inversion counting.
pub fn krocc(m: &[f64], h: &[f64]) -> Result<f64> {
    check_pair(m, h, 2)?;
    let n = m.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| m[a].total_cmp(&m[b]).then(h[a].total_cmp(&h[b])));

    // pairs tied in m, and tied in both
    let (mut tied_m, mut tied_both) = (0u64, 0u64);
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && m[idx[j]] == m[idx[i]] {
            j += 1;
        }
        tied_m += pairs(j - i);
        let mut k = i;
        while k < j {
            let mut l = k;
            while l < j && h[idx[l]] == h[idx[k]] {
                l += 1;
            }
            tied_both += pairs(l - k);
            k = l;
        }
        i = j;
    }

    let mut seq: Vec<f64> = idx.iter().map(|&k| h[k]).collect();
    let mut buf = seq.clone();
    let swaps = merge_count(&mut seq, &mut buf);

    let mut tied_h = 0u64;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && seq[j] == seq[i] {
            j += 1;
        }
        tied_h += pairs(j - i);
        i = j;
    }

    let total = pairs(n);
    // pairs untied in both: concordant + discordant
    let untied = total + tied_both - tied_m - tied_h;
    let discordant = swaps;
    let concordant = untied - discordant;
    Ok((concordant as f64 - discordant as f64) / total as f64)
}

fn pairs(k: usize) -> u64 {
    (k as u64) * (k as u64).saturating_sub(1) / 2
}

/// Sorts `a` ascending and returns the number of strict inversions.
fn merge_count(a: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = a.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = {
        let (l, r) = a.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        merge_count(l, bl) + merge_count(r, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if a[i] <= a[j] {
            buf[k] = a[i];
            i += 1;
        } else {
            buf[k] = a[j];
            count += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&a[i..mid]);
    k += mid - i;
    buf[k..n].copy_from_slice(&a[j..n]);
    a.copy_from_slice(&buf[..n]);
    count
}

/// Tau-a by enumerating all pairs.
pub fn krocc_brute_force(m: &[f64], h: &[f64]) -> Result<f64> {
    check_pair(m, h, 2)?;
    let n = m.len();
    let mut s = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let a = (m[i] - m[j]).partial_cmp(&0.0).map_or(0, |o| o as i64);
            let b = (h[i] - h[j]).partial_cmp(&0.0).map_or(0, |o| o as i64);
            s += a * b;
        }
    }
    Ok(s as f64 / pairs(n) as f64)
}

/// Quantile by linear interpolation between order statistics
/// (position `q (n - 1)` in the sorted sample).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Keeps the scores within `[Q1 - 1.5 IQR, Q3 + 1.5 IQR]`, in input order.
/// Fewer than four scores are returned unchanged.
pub fn iqr_filter(scores: &[f64]) -> Vec<f64> {
    if scores.len() < 4 {
        return scores.to_vec();
    }
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (q1, q3) = (quantile(&sorted, 0.25), quantile(&sorted, 0.75));
    let iqr = q3 - q1;
    let (lo, hi) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    scores.iter().copied().filter(|&x| x >= lo && x <= hi).collect()
}

/// Sample standard deviation (`n - 1` denominator).
pub fn sample_std(x: &[f64]) -> f64 {
    let m = mean(x);
    (x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() - 1) as f64).sqrt()
}

pub const Z_95: f64 = 1.96;

/// Half-width `1.96 sigma / sqrt(N)` of the 95% confidence interval.
pub fn confidence_interval(scores: &[f64]) -> Result<f64> {
    if scores.len() < 2 {
        return Err(Error::Statistic(format!(
            "confidence interval needs at least 2 scores, got {}",
            scores.len()
        )));
    }
    Ok(Z_95 * sample_std(scores) / (scores.len() as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const M: [f64; 4] = [1.0, 2.0, 3.0, 4.0];
    const H: [f64; 4] = [1.0, 3.0, 2.0, 4.0];

    #[test]
    fn worked_example() {
        assert!((plcc(&M, &H).unwrap() - 0.8).abs() < 1e-12);
        assert!((srocc(&M, &H).unwrap() - 0.8).abs() < 1e-12);
        assert!((krocc(&M, &H).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn perfect_agreement() {
        let h: Vec<f64> = M.iter().map(|x| 2.0 * x + 3.0).collect();
        let r: Vec<f64> = M.iter().map(|x| -x).collect();
        assert!((plcc(&M, &h).unwrap() - 1.0).abs() < 1e-12);
        assert!((plcc(&M, &r).unwrap() + 1.0).abs() < 1e-12);
        let cubed: Vec<f64> = M.iter().map(|x| x * x * x).collect();
        assert_eq!(srocc(&M, &cubed).unwrap(), 1.0);
        assert_eq!(srocc(&M, &r).unwrap(), -1.0);
        assert_eq!(krocc(&M, &cubed).unwrap(), 1.0);
        assert_eq!(krocc(&M, &r).unwrap(), -1.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(plcc(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(plcc(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(srocc(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(krocc(&[1.0], &[1.0]).is_err());
        assert!(plcc(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn ties_get_average_ranks() {
        assert_eq!(ranks(&[10.0, 20.0, 10.0, 30.0]), vec![1.5, 3.0, 1.5, 4.0]);
        assert_eq!(ranks(&[5.0; 4]), vec![2.5; 4]);
    }

    #[test]
    fn krocc_matches_brute_force_with_ties() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let n = rng.random_range(2..40);
            let m: Vec<f64> = (0..n).map(|_| rng.random_range(0..6) as f64).collect();
            let h: Vec<f64> = (0..n).map(|_| rng.random_range(0..6) as f64).collect();
            assert_eq!(krocc(&m, &h).unwrap(), krocc_brute_force(&m, &h).unwrap());
        }
    }

    #[test]
    fn krocc_with_both_sides_mostly_tied() {
        let m = [0.0, 0.0, 0.0, 0.0, 1.0];
        let h = [1.0, 1.0, 1.0, 1.0, 0.0];
        assert_eq!(krocc(&m, &h).unwrap(), -0.4);
        assert_eq!(krocc(&[2.0; 6], &[3.0; 6]).unwrap(), 0.0);
    }

    #[test]
    fn iqr_examples() {
        assert_eq!(iqr_filter(&[1.0, 2.0, 2.0, 3.0]), vec![1.0, 2.0, 2.0, 3.0]);
        assert_eq!(iqr_filter(&[1.0, 2.0, 2.0, 3.0, 100.0]), vec![1.0, 2.0, 2.0, 3.0]);
        assert_eq!(iqr_filter(&[4.0; 6]), vec![4.0; 6]);
        assert_eq!(iqr_filter(&[1.0, 100.0]), vec![1.0, 100.0]);
        let sorted = [1.0, 2.0, 2.0, 3.0, 100.0];
        assert_eq!(quantile(&sorted, 0.25), 2.0);
        assert_eq!(quantile(&sorted, 0.75), 3.0);
    }

    #[test]
    fn confidence_examples() {
        assert_eq!(confidence_interval(&[3.0, 3.0, 3.0]).unwrap(), 0.0);
        let ci = confidence_interval(&[0.0, 6.0]).unwrap();
        assert!((ci - 1.96 * 18f64.sqrt() / 2f64.sqrt()).abs() < 1e-12);
        assert!((ci - 5.88).abs() < 1e-9);
        assert!(confidence_interval(&[1.0]).is_err());
    }
}
