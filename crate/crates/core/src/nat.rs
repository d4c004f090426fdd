//! Exact natural numbers with a structural fast path for Cantor pairs.
//!
//! Every index in the system is a natural number, but the indices produced by
//! the fixed-point constructions are pair towers whose decimal expansion is
//! astronomically large (each `cons` squares the tail). `Nat` therefore keeps
//! a number either in numeric form or as an unevaluated `pair(a, b)` node.
//! Both forms denote exact naturals; `pair_nat`/`unpair_nat`, successor and
//! predecessor all work structurally on pair nodes, so no operation in the
//! interpreter ever needs to flatten a large index into digits.

use std::fmt;
use std::rc::Rc;

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::ToPrimitive;

/// Numbers up to this many bits are computed numerically when paired.
/// Anything beyond stays a structural pair node, which keeps unpairing (and
/// with it decoding) free of big-integer square roots on hot paths.
const NUMERIC_PAIR_BITS: u64 = 192;

#[derive(Clone)]
pub struct Nat(Rc<Node>);

enum Node {
    Small(u64),
    Big(BigUint),
    /// `pair(a, b)`, kept unevaluated. The cached field is an upper bound on
    /// the bit length of the denoted value.
    Pair(Nat, Nat, u64),
}

impl Nat {
    pub fn from_u64(v: u64) -> Nat {
        Nat(Rc::new(Node::Small(v)))
    }

    pub fn zero() -> Nat {
        Nat::from_u64(0)
    }

    pub fn one() -> Nat {
        Nat::from_u64(1)
    }

    pub fn from_biguint(v: BigUint) -> Nat {
        match v.to_u64() {
            Some(s) => Nat::from_u64(s),
            None => Nat(Rc::new(Node::Big(v))),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(*self.0, Node::Small(0))
    }

    pub fn to_u64(&self) -> Option<u64> {
        match &*self.0 {
            Node::Small(v) => Some(*v),
            Node::Big(_) => None,
            Node::Pair(..) => None,
        }
    }

    /// Saturating conversion, used for fuel budgets read out of registers.
    pub fn to_u64_saturating(&self) -> u64 {
        match &*self.0 {
            Node::Small(v) => *v,
            Node::Big(b) => b.to_u64().unwrap_or(u64::MAX),
            Node::Pair(..) => u64::MAX,
        }
    }

    /// Upper bound on the bit length of the value.
    pub fn bits_estimate(&self) -> u64 {
        match &*self.0 {
            Node::Small(v) => 64 - v.leading_zeros() as u64,
            Node::Big(b) => b.bits(),
            Node::Pair(_, _, bits) => *bits,
        }
    }

    fn is_numeric(&self) -> bool {
        !matches!(*self.0, Node::Pair(..))
    }

    /// Materialize the denoted value, refusing if it would exceed `max_bits`.
    pub fn to_biguint_checked(&self, max_bits: u64) -> Option<BigUint> {
        if self.bits_estimate() > max_bits {
            return None;
        }
        Some(match &*self.0 {
            Node::Small(v) => BigUint::from(*v),
            Node::Big(b) => b.clone(),
            Node::Pair(a, b, _) => {
                let x = a.to_biguint_checked(max_bits)?;
                let y = b.to_biguint_checked(max_bits)?;
                pair_biguint(&x, &y)
            }
        })
    }
}

fn pair_u128(x: u64, y: u64) -> u128 {
    let s = x as u128 + y as u128;
    s * (s + 1) / 2 + y as u128
}

fn pair_biguint(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    (&s * (&s + 1u32)) / 2u32 + y
}

/// Inverse of the Cantor pairing on concrete integers.
fn unpair_biguint(n: &BigUint) -> (BigUint, BigUint) {
    // s = floor((sqrt(8n+1) - 1) / 2), then y = n - s(s+1)/2, x = s - y.
    let d = (n * 8u32 + 1u32).sqrt();
    let s = (&d - 1u32) / 2u32;
    let tri = (&s * (&s + 1u32)) / 2u32;
    let y = n - tri;
    let x = &s - &y;
    (x, y)
}

fn unpair_u64(n: u64) -> (u64, u64) {
    let d = ((8u128 * n as u128 + 1).sqrt()) as u128;
    let s = (d - 1) / 2;
    let tri = s * (s + 1) / 2;
    let y = n as u128 - tri;
    let x = s - y;
    (x as u64, y as u64)
}

/// `pair(x, y) = (x+y)(x+y+1)/2 + y` — the bijection fixed for the whole
/// numbering. Large results are kept structural.
pub fn pair_nat(x: &Nat, y: &Nat) -> Nat {
    match (&*x.0, &*y.0) {
        (Node::Small(a), Node::Small(b)) if a.checked_add(*b).map_or(false, |s| s < 1 << 62) => {
            let p = pair_u128(*a, *b);
            match u64::try_from(p) {
                Ok(v) => Nat::from_u64(v),
                Err(_) => Nat::from_biguint(BigUint::from(p)),
            }
        }
        _ => {
            let xb = x.bits_estimate();
            let yb = y.bits_estimate();
            if x.is_numeric() && y.is_numeric() && xb.max(yb) <= NUMERIC_PAIR_BITS {
                let v = pair_biguint(
                    &x.to_biguint_checked(u64::MAX).expect("numeric"),
                    &y.to_biguint_checked(u64::MAX).expect("numeric"),
                );
                return Nat::from_biguint(v);
            }
            let bits = xb.max(yb).saturating_mul(2).saturating_add(2);
            Nat(Rc::new(Node::Pair(x.clone(), y.clone(), bits)))
        }
    }
}

/// Total inverse of `pair_nat`.
pub fn unpair_nat(n: &Nat) -> (Nat, Nat) {
    match &*n.0 {
        Node::Small(v) => {
            let (x, y) = unpair_u64(*v);
            (Nat::from_u64(x), Nat::from_u64(y))
        }
        Node::Big(b) => unpair_big_cached(b),
        Node::Pair(a, b, _) => (a.clone(), b.clone()),
    }
}

/// Splitting a materialized big number costs a big-integer square root, and
/// decoding walks the same parsed literals over and over; memoize per thread.
fn unpair_big_cached(b: &BigUint) -> (Nat, Nat) {
    use std::cell::RefCell;
    use std::collections::HashMap;
    thread_local! {
        static CACHE: RefCell<HashMap<BigUint, (Nat, Nat)>> = RefCell::new(HashMap::new());
    }
    if b.bits() < 512 {
        let (x, y) = unpair_biguint(b);
        return (Nat::from_biguint(x), Nat::from_biguint(y));
    }
    CACHE.with(|c| {
        if let Some(hit) = c.borrow().get(b) {
            return hit.clone();
        }
        let (x, y) = unpair_biguint(b);
        let result = (Nat::from_biguint(x), Nat::from_biguint(y));
        let mut map = c.borrow_mut();
        if map.len() > 4096 {
            map.clear();
        }
        map.insert(b.clone(), result.clone());
        result
    })
}

pub fn succ_nat(n: &Nat) -> Nat {
    match &*n.0 {
        Node::Small(v) => match v.checked_add(1) {
            Some(w) => Nat::from_u64(w),
            None => Nat::from_biguint(BigUint::from(*v) + 1u32),
        },
        Node::Big(b) => Nat::from_biguint(b + 1u32),
        Node::Pair(a, b, _) => {
            // pair(x, y) + 1 walks one step along the next anti-diagonal:
            // x > 0: pair(x-1, y+1); x = 0: pair(y+1, 0).
            if a.is_zero() {
                pair_nat(&succ_nat(b), &Nat::zero())
            } else {
                pair_nat(&pred_nat(a), &succ_nat(b))
            }
        }
    }
}

/// Monus: `pred(0) = 0`.
pub fn pred_nat(n: &Nat) -> Nat {
    match &*n.0 {
        Node::Small(v) => Nat::from_u64(v.saturating_sub(1)),
        Node::Big(b) => Nat::from_biguint(b - 1u32),
        Node::Pair(a, b, _) => {
            // pair(x, y) - 1: y > 0: pair(x+1, y-1); y = 0: pair(0, x-1).
            // A pair node never denotes 0, so this is total here.
            if b.is_zero() {
                pair_nat(&Nat::zero(), &pred_nat(a))
            } else {
                pair_nat(&succ_nat(a), &pred_nat(b))
            }
        }
    }
}

pub fn nat_eq(a: &Nat, b: &Nat) -> bool {
    if Rc::ptr_eq(&a.0, &b.0) {
        return true;
    }
    match (&*a.0, &*b.0) {
        (Node::Small(x), Node::Small(y)) => x == y,
        (Node::Small(_), Node::Big(_)) | (Node::Big(_), Node::Small(_)) => false,
        (Node::Big(x), Node::Big(y)) => x == y,
        (Node::Pair(..), Node::Small(_)) | (Node::Small(_), Node::Pair(..)) => {
            // A pair node always denotes a value past the numeric-pair cutoff.
            false
        }
        (Node::Pair(x1, y1, _), Node::Pair(x2, y2, _)) => {
            // Cantor pairing is injective.
            nat_eq(x1, x2) && nat_eq(y1, y2)
        }
        (Node::Pair(x, y, bits), Node::Big(n)) | (Node::Big(n), Node::Pair(x, y, bits)) => {
            if *bits < n.bits() / 4 {
                return false;
            }
            let (nx, ny) = unpair_biguint(n);
            nat_eq(x, &Nat::from_biguint(nx)) && nat_eq(y, &Nat::from_biguint(ny))
        }
    }
}

/// Ordering of denoted values. Exact for numeric forms; pair nodes are only
/// ever compared against each other through their components when the bit
/// estimates cannot already decide, which all practical graph codes avoid.
pub fn nat_cmp(a: &Nat, b: &Nat) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    if nat_eq(a, b) {
        return Ordering::Equal;
    }
    match (&*a.0, &*b.0) {
        (Node::Small(x), Node::Small(y)) => x.cmp(y),
        (Node::Big(x), Node::Big(y)) => x.cmp(y),
        (Node::Small(x), Node::Big(y)) => BigUint::from(*x).cmp(y),
        (Node::Big(x), Node::Small(y)) => x.cmp(&BigUint::from(*y)),
        _ => {
            let (ab, bb) = (a.bits_estimate(), b.bits_estimate());
            // Estimates are within a factor-2 band of the truth; a wide gap decides.
            if ab > 4 * bb + 8 {
                Ordering::Greater
            } else if bb > 4 * ab + 8 {
                Ordering::Less
            } else {
                let max = ab.max(bb) + 64;
                let av = a.to_biguint_checked(max);
                let bv = b.to_biguint_checked(max);
                match (av, bv) {
                    (Some(x), Some(y)) => x.cmp(&y),
                    // Beyond materialization: fall back to the estimate.
                    _ => ab.cmp(&bb),
                }
            }
        }
    }
}

impl PartialEq for Nat {
    fn eq(&self, other: &Self) -> bool {
        nat_eq(self, other)
    }
}
impl Eq for Nat {}

impl PartialOrd for Nat {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(nat_cmp(self, other))
    }
}
impl Ord for Nat {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        nat_cmp(self, other)
    }
}

impl From<u64> for Nat {
    fn from(v: u64) -> Nat {
        Nat::from_u64(v)
    }
}

impl From<u32> for Nat {
    fn from(v: u32) -> Nat {
        Nat::from_u64(v as u64)
    }
}

impl fmt::Debug for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Small(v) => write!(f, "{v}"),
            Node::Big(b) => {
                if b.bits() <= 256 {
                    write!(f, "{b}")
                } else {
                    write!(f, "<num:{} bits>", b.bits())
                }
            }
            Node::Pair(_, _, bits) => write!(f, "<pair:~{bits} bits>"),
        }
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Decimal rendering for interfaces that need digits. Values too large to
/// flatten are rendered as a size annotation instead.
pub fn nat_to_decimal(n: &Nat, max_bits: u64) -> String {
    match n.to_biguint_checked(max_bits) {
        Some(v) => v.to_string(),
        None => format!("<index too large to print: ~2^{} >", n.bits_estimate()),
    }
}

/// Key for per-run caches over `Nat` values: small numbers compare by value,
/// everything else by physical node identity (re-decoding on a miss is cheap
/// and semantics-neutral).
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum NatKey {
    Small(u64),
    Node(usize),
}

impl Nat {
    pub fn cache_key(&self) -> NatKey {
        match &*self.0 {
            Node::Small(v) => NatKey::Small(*v),
            _ => NatKey::Node(Rc::as_ptr(&self.0) as *const () as usize),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Nat {
        Nat::from_u64(v)
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pair_nat(&n(0), &n(0)).to_u64(), Some(0));
        assert_eq!(pair_nat(&n(1), &n(2)).to_u64(), Some(8));
    }

    #[test]
    fn pairing_bijection_small() {
        for x in 0..100u64 {
            for y in 0..100u64 {
                let p = pair_nat(&n(x), &n(y));
                let (a, b) = unpair_nat(&p);
                assert_eq!(a.to_u64(), Some(x));
                assert_eq!(b.to_u64(), Some(y));
            }
        }
        for v in 0..10_000u64 {
            let (a, b) = unpair_nat(&n(v));
            assert_eq!(pair_nat(&a, &b).to_u64(), Some(v));
        }
    }

    #[test]
    fn structural_succ_pred_match_numeric() {
        // Build a pair node out of moderately large numerics, and check that
        // succ/pred on the structural form track BigUint arithmetic.
        let big = Nat::from_biguint(BigUint::from(7u32).pow(3000));
        let p = pair_nat(&big, &n(5));
        assert!(!p.is_numeric());
        let v = p.to_biguint_checked(u64::MAX).unwrap();
        let s = succ_nat(&p);
        assert_eq!(s.to_biguint_checked(u64::MAX).unwrap(), &v + 1u32);
        let d = pred_nat(&p);
        assert_eq!(d.to_biguint_checked(u64::MAX).unwrap(), &v - 1u32);
        // succ(pred) round-trips structurally
        assert!(nat_eq(&succ_nat(&d), &p));
    }

    #[test]
    fn structural_eq_mixed_forms() {
        let big = Nat::from_biguint(BigUint::from(3u32).pow(4000));
        let p = pair_nat(&big, &big);
        let q = pair_nat(&big, &big);
        assert!(nat_eq(&p, &q));
        let r = pair_nat(&big, &succ_nat(&big));
        assert!(!nat_eq(&p, &r));
        // numeric vs structural of the same value
        let a = Nat::from_biguint(BigUint::from(11u32).pow(1300));
        let s = pair_nat(&a, &n(3));
        let numeric = Nat::from_biguint(s.to_biguint_checked(u64::MAX).unwrap());
        assert!(nat_eq(&s, &numeric));
        assert!(!nat_eq(&succ_nat(&s), &numeric));
    }

    #[test]
    fn pred_of_zero_is_zero() {
        assert!(pred_nat(&n(0)).is_zero());
    }

    #[test]
    fn ordering_small_and_big() {
        assert!(nat_cmp(&n(3), &n(5)).is_lt());
        let big = Nat::from_biguint(BigUint::from(2u32).pow(100));
        assert!(nat_cmp(&n(u64::MAX), &big).is_lt());
        let p = pair_nat(&big, &big);
        assert!(nat_cmp(&big, &p).is_lt());
    }
}
