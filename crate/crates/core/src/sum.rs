//! Exact floating-point summation.
//!
//! Every finite f64 is an integer multiple of 2^-1074, so the running total
//! is kept as a wide fixed-point integer split into 32-bit limbs (a Kulisch
//! accumulator). Integer addition is associative, so the final value, the
//! correctly rounded sum, does not depend on the order of the terms or on
//! how the work was split across threads.

const LIMB_BITS: u32 = 32;
const LIMB_MASK: i64 = (1 << LIMB_BITS) - 1;
// bit positions 0..=2098 plus room for carries
const LIMBS: usize = 70;
// limbs stay below 2^63 for at least this many unnormalized adds
const NORMALIZE_EVERY: u32 = 1 << 29;

#[derive(Debug, Clone)]
pub struct ExactSum {
    limbs: [i64; LIMBS],
    pending: u32,
    // NaN and infinities, summed naively
    special: f64,
}

impl Default for ExactSum {
    fn default() -> Self {
        Self {
            limbs: [0; LIMBS],
            pending: 0,
            special: 0.0,
        }
    }
}

impl ExactSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        if !x.is_finite() {
            self.special += x;
            return;
        }
        let bits = x.to_bits();
        let biased = ((bits >> 52) & 0x7ff) as u32;
        let frac = bits & ((1 << 52) - 1);
        // x = ±m·2^(pos - 1074)
        let (m, pos) = if biased == 0 { (frac, 0) } else { (frac | (1 << 52), biased - 1) };
        if m == 0 {
            return;
        }
        let k = (pos / LIMB_BITS) as usize;
        let v = (m as u128) << (pos % LIMB_BITS);
        let parts = [
            (v as i64) & LIMB_MASK,
            ((v >> 32) as i64) & LIMB_MASK,
            (v >> 64) as i64,
        ];
        if bits >> 63 == 0 {
            for (j, p) in parts.into_iter().enumerate() {
                self.limbs[k + j] += p;
            }
        } else {
            for (j, p) in parts.into_iter().enumerate() {
                self.limbs[k + j] -= p;
            }
        }
        self.pending += 1;
        if self.pending >= NORMALIZE_EVERY {
            self.normalize();
        }
    }

    /// Carries so every limb but the last lies in [0, 2^32).
    fn normalize(&mut self) {
        for i in 0..LIMBS - 1 {
            let carry = self.limbs[i] >> LIMB_BITS;
            self.limbs[i] &= LIMB_MASK;
            self.limbs[i + 1] += carry;
        }
        self.pending = 0;
    }

    /// Folds another accumulator in; exact, so merge order does not matter.
    pub fn merge(mut self, mut other: ExactSum) -> ExactSum {
        self.normalize();
        other.normalize();
        for (a, b) in self.limbs.iter_mut().zip(other.limbs) {
            *a += b;
        }
        self.special += other.special;
        self.normalize();
        self
    }

    /// The exact sum rounded to nearest, ties to even.
    pub fn value(&self) -> f64 {
        if self.special != 0.0 || self.special.is_nan() {
            return self.special;
        }
        let mut acc = self.clone();
        acc.normalize();
        let negative = acc.limbs[LIMBS - 1] < 0;
        if negative {
            acc.limbs.iter_mut().for_each(|l| *l = -*l);
            acc.normalize();
        }
        let Some(h) = acc.limbs.iter().rposition(|&l| l != 0) else {
            return 0.0;
        };
        let limb = |i: i64| if i < 0 { 0u128 } else { acc.limbs[i as usize] as u128 };
        let h = h as i64;
        let window = limb(h) << 64 | limb(h - 1) << 32 | limb(h - 2);
        let window_lsb = 32 * (h - 2);
        let top = window_lsb + 127 - window.leading_zeros() as i64;
        let bits = if top <= 52 {
            // subnormal or smallest normal binade: exact
            (window >> (-window_lsb).max(0) << window_lsb.max(0)) as u64
        } else {
            let lsb = top - 52;
            let shift = (lsb - window_lsb) as u32;
            let mut m = (window >> shift) as u64;
            let rem = window & ((1u128 << shift) - 1);
            let half = 1u128 << (shift - 1);
            let sticky = (0..(h - 2).max(0)).any(|i| acc.limbs[i as usize] != 0);
            if rem > half || (rem == half && (sticky || m & 1 == 1)) {
                m += 1;
            }
            // exponent field and implicit bit add up; a carry out of the
            // mantissa moves to the next binade by itself
            ((lsb as u64) << 52) + m
        };
        let magnitude = if bits >= 0x7ff << 52 { f64::INFINITY } else { f64::from_bits(bits) };
        if negative {
            -magnitude
        } else {
            magnitude
        }
    }
}

impl Extend<f64> for ExactSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for ExactSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = ExactSum::new();
        s.extend(iter);
        s
    }
}
