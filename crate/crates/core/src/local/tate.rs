use sha2::{Digest, Sha256};

use super::element::LocalElement;
use crate::algebra::{add_mod, mul_mod, sub_mod, Poly};
use crate::error::{Error, Result};

/// Integer coefficients of `q·j(q) = 1 + 744q + 196884q^2 + ...`, one per line.
pub const J_COEFFICIENTS: &str = include_str!("../../data/j_coefficients.txt");
const J_CHECKSUM: &str = include_str!("../../data/j_coefficients.sha256");

/// Check the stored expansion against its recorded SHA-256.
pub fn verify_j_checksum() -> Result<()> {
    let want = J_CHECKSUM.split_whitespace().next().unwrap_or("");
    let got = hex::encode(Sha256::digest(J_COEFFICIENTS.as_bytes()));
    if got != want {
        return Err(Error::Fixture(format!(
            "j-expansion checksum mismatch: {got} != {want}"
        )));
    }
    Ok(())
}

fn decimal_mod(s: &str, p: u32) -> u32 {
    let (neg, digits) = match s.strip_prefix('-') {
        Some(d) => (true, d),
        None => (false, s),
    };
    let r = digits
        .bytes()
        .fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % p as u64) as u32;
    if neg {
        sub_mod(0, r, p)
    } else {
        r
    }
}

/// The `j`-expansion reduced mod `p` and its reversion.
#[derive(Clone, Debug)]
pub struct TateSeries {
    p: u32,
    /// `J[k]` = coefficient of `q^(k-1)` in `j(q)`.
    j: Vec<u32>,
    /// `q = Σ_k h[k] s^(k+1)` where `s = 1/j`.
    h: Vec<u32>,
}

fn series_mul(a: &[u32], b: &[u32], n: usize, p: u32) -> Vec<u32> {
    let mut c = vec![0u32; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            c[i + j] = add_mod(c[i + j], mul_mod(x, y, p), p);
        }
    }
    c
}

/// `f(g)` for a power series `f` and `g` with zero constant term, truncated at `n`.
fn compose(f: &[u32], g: &[u32], n: usize, p: u32) -> Vec<u32> {
    let mut acc = vec![0u32; n];
    for &c in f.iter().take(n).rev() {
        acc = series_mul(&acc, g, n, p);
        acc[0] = add_mod(acc[0], c, p);
    }
    acc
}

impl TateSeries {
    /// Load the stored expansion reduced mod the characteristic `p`, reverted to `order` terms.
    pub fn new(p: u32, order: usize) -> Result<Self> {
        verify_j_checksum()?;
        let j: Vec<u32> = J_COEFFICIENTS
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| decimal_mod(l.trim(), p))
            .collect();
        if order > j.len() {
            return Err(Error::PrecisionExhausted(format!(
                "reversion order {order} exceeds the {} stored j-coefficients",
                j.len()
            )));
        }
        // q = s·J(q) with J(q) = q·j(q); Newton on F(Q) = Q - s·J(Q).
        let n = order;
        let jser = &j[..n];
        let dj: Vec<u32> = (1..n)
            .map(|k| mul_mod(jser[k], (k as u64 % p as u64) as u32, p))
            .chain(std::iter::once(0))
            .collect();
        // Q as a series in s, with Q[0] = 0.
        let mut qs = vec![0u32; n + 1];
        qs[1] = 1;
        let mut have = 2;
        while have < n + 1 {
            have = (2 * have).min(n + 1);
            let m = have;
            let jq = compose(jser, &qs[..m], m, p);
            let djq = compose(&dj, &qs[..m], m, p);
            // F = Q - s·J(Q), F' = 1 - s·J'(Q)
            let mut f = qs[..m].to_vec();
            let mut fp = vec![0u32; m];
            fp[0] = 1;
            for k in 0..m - 1 {
                f[k + 1] = sub_mod(f[k + 1], jq[k], p);
                fp[k + 1] = sub_mod(fp[k + 1], djq[k], p);
            }
            let inv = series_inverse(&fp, m, p);
            let step = series_mul(&f, &inv, m, p);
            for k in 0..m {
                qs[k] = sub_mod(qs[k], step[k], p);
            }
        }
        let h = qs[1..=n].to_vec();
        Ok(Self { p, j, h })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Coefficients of `j(q)`, starting at `q^-1`.
    pub fn j_coefficients(&self) -> &[u32] {
        &self.j
    }

    /// Coefficients `h` with `q = Σ h[k] (1/j)^(k+1)`.
    pub fn reversion(&self) -> &[u32] {
        &self.h
    }

    /// Evaluate `j(q)` for `ν(q) > 0`, keeping the precision of `q`.
    pub fn j_of_q(&self, q: &LocalElement) -> Result<LocalElement> {
        let m = q.valuation();
        if q.is_zero() || m <= 0 {
            return Err(Error::InvalidInput("j(q) needs ν(q) > 0".into()));
        }
        let field = q.field();
        let prec = q.precision();
        // relative precision of j is that of q; terms q^k (k ≥ 0) matter while k·m < prec - m
        let needed = ((prec as i64 - m) + m - 1) / m;
        let terms = needed.max(0) as usize + 1;
        if terms + 1 > self.j.len() {
            return Err(Error::PrecisionExhausted(format!(
                "j-expansion too short for {prec} digits"
            )));
        }
        let abs = prec as i64 - m;
        let mut acc = q.inv()?;
        let mut qk = field.one(prec);
        for k in 0..terms {
            let c = self.j[k + 1];
            if c != 0 {
                let term = qk.mul(&field.from_parts(0, Poly::constant(self.p, c), prec));
                acc = acc.add(&term);
            }
            qk = qk.mul(q);
            if qk.valuation() >= abs {
                break;
            }
        }
        Ok(acc.truncate(prec))
    }
}

fn series_inverse(f: &[u32], n: usize, p: u32) -> Vec<u32> {
    let inv0 = crate::algebra::inv_mod(f[0], p);
    let mut g = vec![0u32; n];
    g[0] = inv0;
    for k in 1..n {
        let mut s = 0;
        for i in 1..=k.min(f.len() - 1) {
            s = add_mod(s, mul_mod(f[i], g[k - i], p), p);
        }
        g[k] = mul_mod(sub_mod(0, s, p), inv0, p);
    }
    g
}

/// The Tate period `q` with `j(q) = j`, to `prec` relative digits.
pub fn tate_q_from_j(j: &LocalElement, prec: u32) -> Result<LocalElement> {
    if j.is_zero() || j.valuation() >= 0 {
        return Err(Error::InvalidInput(format!(
            "Tate parametrization needs ν(j) < 0, got {}",
            j.valuation()
        )));
    }
    let m = -j.valuation();
    let prec = prec.min(j.precision());
    let terms = (prec as i64 + m - 1) / m;
    let series = TateSeries::new(j.field().q(), (terms as usize + 1).max(2))?;
    tate_q_with(&series, j, prec)
}

/// As [`tate_q_from_j`] with a prebuilt series.
pub fn tate_q_with(series: &TateSeries, j: &LocalElement, prec: u32) -> Result<LocalElement> {
    let m = -j.valuation();
    let prec = prec.min(j.precision());
    let terms = ((prec as i64 + m - 1) / m) as usize;
    if terms > series.h.len() {
        return Err(Error::PrecisionExhausted(format!(
            "reversion has {} terms, {terms} needed",
            series.h.len()
        )));
    }
    let field = j.field();
    let s = j.inv()?.truncate(prec);
    let mut acc = field.zero(prec as i64);
    for k in (0..terms).rev() {
        if series.h[k] != 0 {
            acc = acc.add(&field.from_parts(0, Poly::constant(series.p, series.h[k]), prec));
        }
        acc = acc.mul(&s);
    }
    Ok(acc.truncate(prec))
}
