use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Scalar;

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            while n.is_multiple_of(d) {
                n /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree
/// first. Results are memoized.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    // x^n - 1 divided by every Phi_d with d | n, d < n
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let div = cyclotomic_poly(d);
        num = exact_div_monic(&num, &div);
    }
    let coeffs: Vec<i64> = num
        .iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow"))
        .collect();
    let arc = Arc::new(coeffs);
    cache.lock().unwrap().insert(n, arc.clone());
    arc
}

fn exact_div_monic(num: &[BigInt], div: &[i64]) -> Vec<BigInt> {
    let dn = div.len() - 1;
    let mut rem = num.to_vec();
    let qlen = rem.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (i, dc) in div.iter().enumerate() {
            rem[k + i] -= &c * BigInt::from(*dc);
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// An element of the cyclotomic field `Q(zeta_N)`, stored in the power basis
/// `1, zeta, ..., zeta^(phi(N)-1)`.
///
/// Elements of different orders combine in the field of the lcm order.
#[derive(Clone)]
pub struct Cyc {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl Cyc {
    pub fn from_coeffs(order: u64, coeffs: Vec<BigRational>) -> Self {
        assert!(order >= 1);
        let mut c = coeffs;
        reduce_in_place(&mut c, order);
        Cyc { order, coeffs: c }
    }

    pub fn rational(q: BigRational) -> Self {
        Cyc {
            order: 1,
            coeffs: vec![q],
        }
    }

    /// `zeta_n^k`.
    pub fn zeta(n: u64, k: i64) -> Self {
        assert!(n >= 1);
        let e = k.rem_euclid(n as i64) as usize;
        let mut c = vec![BigRational::zero(); e + 1];
        c[e] = BigRational::one();
        Cyc::from_coeffs(n, c)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Image under `Q(zeta_N) -> Q(zeta_M)`; requires `N | M`.
    pub fn embed(&self, m: u64) -> Cyc {
        assert!(
            m.is_multiple_of(self.order),
            "cannot embed order {} into {}",
            self.order,
            m
        );
        if m == self.order {
            return self.clone();
        }
        let step = (m / self.order) as usize;
        let mut c = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i * step] = a.clone();
        }
        Cyc::from_coeffs(m, c)
    }

    fn align(&self, other: &Cyc) -> (Cyc, Cyc) {
        if self.order == other.order {
            return (self.clone(), other.clone());
        }
        let m = self.order.lcm(&other.order);
        (self.embed(m), other.embed(m))
    }

    /// The automorphism `zeta -> zeta^a`, `gcd(a, N) = 1`.
    pub fn galois(&self, a: i64) -> Cyc {
        let n = self.order as i64;
        assert!(a.gcd(&n) == 1, "galois exponent must be prime to the order");
        let mut c = vec![BigRational::zero(); n as usize];
        for (i, x) in self.coeffs.iter().enumerate() {
            let e = (i as i64 * a).rem_euclid(n) as usize;
            c[e] += x;
        }
        Cyc::from_coeffs(self.order, c)
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Cyc {
        self.galois(-1)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        let minimal = self.shrink();
        if minimal.order == 1 || minimal.order == 2 {
            Some(minimal.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-express in the smallest `Q(zeta_d)`, `d | N`, containing the element.
    pub fn shrink(&self) -> Cyc {
        if self.is_zero() {
            return Cyc::zero();
        }
        let mut best = self.clone();
        for d in divisors(self.order) {
            if d == self.order {
                break;
            }
            // lies in Q(zeta_d) iff fixed by Gal(Q(zeta_N)/Q(zeta_d))
            let step = (self.order / d) as usize;
            let n = self.order as i64;
            let fixed = (1..n)
                .filter(|a| a.gcd(&n) == 1 && a % d as i64 == 1 % d as i64)
                .all(|a| self.galois(a) == *self);
            if fixed {
                best = self.descend(d, step);
                break;
            }
        }
        best
    }

    fn descend(&self, d: u64, step: usize) -> Cyc {
        // Solve for y in Q(zeta_d) with embed(y) == self by linear algebra on
        // the power basis.
        let phi_d = euler_phi(d) as usize;
        let phi_n = self.coeffs.len();
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(phi_d);
        for j in 0..phi_d {
            let mut c = vec![BigRational::zero(); j * step + 1];
            c[j * step] = BigRational::one();
            cols.push(Cyc::from_coeffs(self.order, c).coeffs);
        }
        let mut rows: Vec<Vec<BigRational>> = (0..phi_n)
            .map(|i| {
                let mut r: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
                r.push(self.coeffs[i].clone());
                r
            })
            .collect();
        let sol = solve_overdetermined(&mut rows, phi_d).expect("descent must be solvable");
        Cyc::from_coeffs(d, sol)
    }

    fn mul_ref(&self, other: &Cyc) -> Cyc {
        if self.order == 1 {
            return other.scale(&self.coeffs[0]);
        }
        if other.order == 1 {
            return self.scale(&other.coeffs[0]);
        }
        let (a, b) = self.align(other);
        let mut c = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                c[i + j] += x * y;
            }
        }
        Cyc::from_coeffs(a.order, c)
    }

    pub fn scale(&self, q: &BigRational) -> Cyc {
        Cyc {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    fn inverse(&self) -> Option<Cyc> {
        if self.is_zero() {
            return None;
        }
        if self.order <= 2 {
            return Some(Cyc::rational(self.coeffs[0].recip()));
        }
        // solve (mult-by-self) y = 1 in the power basis
        let n = self.coeffs.len();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![BigRational::zero(); j + 1];
            e[j] = BigRational::one();
            cols.push(self.mul_ref(&Cyc::from_coeffs(self.order, e)).coeffs);
        }
        let mut rows: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut r: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
                r.push(if i == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                r
            })
            .collect();
        let sol = solve_overdetermined(&mut rows, n)?;
        Some(Cyc::from_coeffs(self.order, sol))
    }
}

/// Gaussian elimination on an augmented system with `nvars` unknowns.
fn solve_overdetermined(rows: &mut [Vec<BigRational>], nvars: usize) -> Option<Vec<BigRational>> {
    let m = rows.len();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..nvars {
        let Some(r) = (pivot_row..m).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, r);
        let inv = rows[pivot_row][col].recip();
        for x in rows[pivot_row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m {
            if r != pivot_row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..=nvars {
                    let delta = &f * &rows[pivot_row][c];
                    rows[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[nvars].is_zero()) {
        return None;
    }
    let mut sol = vec![BigRational::zero(); nvars];
    for (i, col) in pivots.iter().enumerate() {
        sol[*col] = rows[i][nvars].clone();
    }
    Some(sol)
}

fn reduce_in_place(c: &mut Vec<BigRational>, order: u64) {
    let phi = euler_phi(order) as usize;
    if c.len() > phi {
        let poly = cyclotomic_poly(order);
        for k in (phi..c.len()).rev() {
            if c[k].is_zero() {
                continue;
            }
            let top = std::mem::replace(&mut c[k], BigRational::zero());
            for (i, pc) in poly.iter().take(phi).enumerate() {
                if *pc != 0 {
                    c[k - phi + i] -= &top * BigRational::from_integer(BigInt::from(*pc));
                }
            }
        }
    }
    c.resize(phi, BigRational::zero());
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.align(other);
        a.coeffs == b.coeffs
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                _ => format!("({c})z{}^{i}", self.order),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Zero for Cyc {
    fn zero() -> Self {
        Cyc::rational(BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl One for Cyc {
    fn one() -> Self {
        Cyc::rational(BigRational::one())
    }
}

impl Add for Cyc {
    type Output = Cyc;

    fn add(self, rhs: Cyc) -> Cyc {
        let (mut a, b) = if self.order == rhs.order {
            (self, rhs)
        } else {
            self.align(&rhs)
        };
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a
    }
}

impl Sub for Cyc {
    type Output = Cyc;

    fn sub(self, rhs: Cyc) -> Cyc {
        self + (-rhs)
    }
}

impl Neg for Cyc {
    type Output = Cyc;

    fn neg(mut self) -> Cyc {
        for c in self.coeffs.iter_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for Cyc {
    type Output = Cyc;

    fn mul(self, rhs: Cyc) -> Cyc {
        self.mul_ref(&rhs)
    }
}

impl Scalar for Cyc {
    fn is_unit(&self) -> bool {
        !self.is_zero()
    }

    fn inv(&self) -> Option<Self> {
        self.inverse()
    }

    fn from_rational(q: &BigRational) -> Option<Self> {
        Some(Cyc::rational(q.clone()))
    }

    fn root_of_unity(n: u64, k: i64) -> Option<Self> {
        Some(Cyc::zeta(n, k))
    }

    fn sqrt_prime(p: u64) -> Option<Self> {
        if p == 2 {
            return Some(Cyc::zeta(8, 1) + Cyc::zeta(8, -1));
        }
        // quadratic Gauss sum: g^2 = (-1)^((p-1)/2) p
        let mut g = Cyc::zero();
        for a in 1..p {
            let chi = if super::mod_pow(a, (p - 1) / 2, p) == 1 {
                1
            } else {
                -1
            };
            let term = Cyc::zeta(p, a as i64);
            g = if chi == 1 { g + term } else { g - term };
        }
        if p % 4 == 1 {
            Some(g)
        } else {
            Some(-(Cyc::zeta(4, 1) * g))
        }
    }

    fn is_field() -> bool {
        true
    }
}
