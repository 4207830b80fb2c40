//! Base groups for HNN extensions `<H, b | b x b⁻¹ = φ(x), x ∈ A>` and the
//! three built-in instances.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::bs12::{BsElement, Dyadic};
use crate::word::Letter;

/// How the associated subgroups sit in the base group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `A = H = B`: a semidirect product with `Z`.
    Semidirect,
    /// `A = H ≠ B`.
    OneSided,
    /// `A ≠ H ≠ B`.
    Proper,
}

/// A finitely generated base group with associated subgroups `A`, `B` and
/// the isomorphism `φ: A → B`.
pub trait HnnInstance: Sync {
    type Elem: Clone + Debug + Send + Sync;

    fn name(&self) -> &'static str;

    /// The symmetric generating set `Σ`; `Δ = Σ ∪ {b, b⁻¹}`.
    fn sigma(&self) -> &[Letter];

    fn regime(&self) -> Regime;

    fn identity(&self) -> Self::Elem;

    fn letter(&self, l: Letter) -> Self::Elem;

    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    fn inv(&self, x: &Self::Elem) -> Self::Elem;

    fn in_a(&self, x: &Self::Elem) -> bool;

    fn in_b(&self, x: &Self::Elem) -> bool;

    /// Only called on elements of `A`.
    fn phi(&self, x: &Self::Elem) -> Self::Elem;

    /// Only called on elements of `B`.
    fn phi_inv(&self, x: &Self::Elem) -> Self::Elem;

    fn is_identity(&self, x: &Self::Elem) -> bool;

    fn mul_letter(&self, x: &mut Self::Elem, l: Letter) {
        *x = self.mul(x, &self.letter(l));
    }

    fn delta_size(&self) -> usize {
        self.sigma().len() + 2
    }
}

/// `Z² = <a, b | b a b⁻¹ = a>` over `H = <a>`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Z2;

impl HnnInstance for Z2 {
    type Elem = i64;

    fn name(&self) -> &'static str {
        "z2"
    }
    fn sigma(&self) -> &[Letter] {
        &[Letter::A, Letter::AInv]
    }
    fn regime(&self) -> Regime {
        Regime::Semidirect
    }
    fn identity(&self) -> i64 {
        0
    }
    fn letter(&self, l: Letter) -> i64 {
        match l {
            Letter::A => 1,
            Letter::AInv => -1,
            other => panic!("{other:?} is not a base letter"),
        }
    }
    fn mul(&self, x: &i64, y: &i64) -> i64 {
        x + y
    }
    fn inv(&self, x: &i64) -> i64 {
        -x
    }
    fn in_a(&self, _: &i64) -> bool {
        true
    }
    fn in_b(&self, _: &i64) -> bool {
        true
    }
    fn phi(&self, x: &i64) -> i64 {
        *x
    }
    fn phi_inv(&self, x: &i64) -> i64 {
        *x
    }
    fn is_identity(&self, x: &i64) -> bool {
        *x == 0
    }
}

/// An integer that leaves `i128` only when it has to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HybridInt {
    Small(i128),
    Big(BigInt),
}

impl HybridInt {
    fn big(&self) -> BigInt {
        match self {
            HybridInt::Small(v) => BigInt::from(*v),
            HybridInt::Big(v) => v.clone(),
        }
    }

    fn from_big(v: BigInt) -> Self {
        match v.to_i128() {
            Some(s) => HybridInt::Small(s),
            None => HybridInt::Big(v),
        }
    }

    pub fn add(&self, other: &HybridInt) -> HybridInt {
        if let (HybridInt::Small(x), HybridInt::Small(y)) = (self, other) {
            if let Some(s) = x.checked_add(*y) {
                return HybridInt::Small(s);
            }
        }
        Self::from_big(self.big() + other.big())
    }

    pub fn neg(&self) -> HybridInt {
        match self {
            HybridInt::Small(x) if *x != i128::MIN => HybridInt::Small(-x),
            _ => Self::from_big(-self.big()),
        }
    }

    pub fn double(&self) -> HybridInt {
        self.add(self)
    }

    pub fn is_even(&self) -> bool {
        match self {
            HybridInt::Small(x) => x % 2 == 0,
            HybridInt::Big(x) => x.is_even(),
        }
    }

    /// Exact halving of an even value.
    pub fn half(&self) -> HybridInt {
        match self {
            HybridInt::Small(x) => HybridInt::Small(x / 2),
            HybridInt::Big(x) => Self::from_big(x / 2),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            HybridInt::Small(x) => *x == 0,
            HybridInt::Big(x) => x.is_zero(),
        }
    }
}

/// `BS(1,2) = <a, b | b a b⁻¹ = a²>` as an HNN extension of `H = <a>`
/// with `A = H` and `B = 2Z`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Bs12OverZ;

impl HnnInstance for Bs12OverZ {
    type Elem = HybridInt;

    fn name(&self) -> &'static str {
        "bs12"
    }
    fn sigma(&self) -> &[Letter] {
        &[Letter::A, Letter::AInv]
    }
    fn regime(&self) -> Regime {
        Regime::OneSided
    }
    fn identity(&self) -> HybridInt {
        HybridInt::Small(0)
    }
    fn letter(&self, l: Letter) -> HybridInt {
        match l {
            Letter::A => HybridInt::Small(1),
            Letter::AInv => HybridInt::Small(-1),
            other => panic!("{other:?} is not a base letter"),
        }
    }
    fn mul(&self, x: &HybridInt, y: &HybridInt) -> HybridInt {
        x.add(y)
    }
    fn inv(&self, x: &HybridInt) -> HybridInt {
        x.neg()
    }
    fn in_a(&self, _: &HybridInt) -> bool {
        true
    }
    fn in_b(&self, x: &HybridInt) -> bool {
        x.is_even()
    }
    fn phi(&self, x: &HybridInt) -> HybridInt {
        x.double()
    }
    fn phi_inv(&self, x: &HybridInt) -> HybridInt {
        assert!(x.is_even(), "φ⁻¹ applied outside B");
        x.half()
    }
    fn is_identity(&self, x: &HybridInt) -> bool {
        x.is_zero()
    }
}

/// `(num * 2^exp, m)` with odd `num`, or `num = exp = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallBs {
    num: i128,
    exp: i64,
    m: i64,
}

fn shl_checked(x: i128, k: i64) -> Option<i128> {
    if x == 0 {
        return Some(0);
    }
    if !(0..127).contains(&k) {
        return None;
    }
    let y = x << k;
    (y >> k == x).then_some(y)
}

impl SmallBs {
    pub const IDENTITY: SmallBs = SmallBs { num: 0, exp: 0, m: 0 };

    fn new(num: i128, exp: i64, m: i64) -> SmallBs {
        if num == 0 {
            return SmallBs { num: 0, exp: 0, m };
        }
        let tz = num.trailing_zeros();
        SmallBs { num: num >> tz, exp: exp + tz as i64, m }
    }

    pub fn mul(&self, o: &SmallBs) -> Option<SmallBs> {
        let m = self.m.checked_add(o.m)?;
        if o.num == 0 {
            return Some(SmallBs { m, ..*self });
        }
        let e2 = o.exp.checked_add(self.m)?;
        if self.num == 0 {
            return Some(SmallBs { num: o.num, exp: e2, m });
        }
        let e = self.exp.min(e2);
        let x = shl_checked(self.num, self.exp - e)?;
        let y = shl_checked(o.num, e2 - e)?;
        Some(SmallBs::new(x.checked_add(y)?, e, m))
    }

    pub fn inv(&self) -> Option<SmallBs> {
        Some(SmallBs::new(self.num.checked_neg()?, self.exp.checked_sub(self.m)?, -self.m))
    }

    fn to_element(self) -> BsElement {
        BsElement::new(Dyadic::new(BigInt::from(self.num), self.exp), self.m)
    }

    fn from_element(g: &BsElement) -> Option<SmallBs> {
        let num = g.r.mantissa().to_i128()?;
        Some(SmallBs::new(num, g.r.exponent(), g.m))
    }
}

/// Widest dyadic span, in bits, that [`Bs`] keeps exactly.
pub const BS_SPAN_CAP: i64 = 1 << 12;

/// An element of `BS(1,2)` kept in machine words when possible.
///
/// `Huge` stands for any element whose first coordinate spans more than
/// [`BS_SPAN_CAP`] bits, or whose `t`-exponent leaves `i64`. It is absorbing
/// and lies in neither `A` nor `B`, so a walk that reaches it is counted as
/// not returning to the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bs {
    Small(SmallBs),
    Big(BsElement),
    Huge,
}

/// Lowest and highest bit positions of a nonzero dyadic.
fn span(r: &Dyadic) -> Option<(i64, i64)> {
    (!r.is_zero()).then(|| (r.exponent(), r.exponent().saturating_add(r.mantissa().bits() as i64)))
}

impl Bs {
    /// `None` for [`Bs::Huge`].
    pub fn to_element(&self) -> Option<BsElement> {
        match self {
            Bs::Small(s) => Some(s.to_element()),
            Bs::Big(g) => Some(g.clone()),
            Bs::Huge => None,
        }
    }

    pub fn from_element(g: &BsElement) -> Bs {
        match SmallBs::from_element(g) {
            Some(s) => Bs::Small(s),
            None => Bs::Big(g.clone()),
        }
    }

    pub fn is_huge(&self) -> bool {
        matches!(self, Bs::Huge)
    }

    pub fn mul(&self, o: &Bs) -> Bs {
        if let (Bs::Small(x), Bs::Small(y)) = (self, o) {
            if let Some(z) = x.mul(y) {
                return Bs::Small(z);
            }
        }
        let (Some(x), Some(y)) = (self.to_element(), o.to_element()) else {
            return Bs::Huge;
        };
        let Some(m) = x.m.checked_add(y.m) else {
            return Bs::Huge;
        };
        // Refuse products whose first coordinate would be too wide.
        let shifted = span(&y.r).map(|(lo, hi)| (lo.saturating_add(x.m), hi.saturating_add(x.m)));
        let (lo, hi) = match (span(&x.r), shifted) {
            (Some(a), Some(b)) => (a.0.min(b.0), a.1.max(b.1)),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => (0, 0),
        };
        if hi.saturating_sub(lo) > BS_SPAN_CAP || m.unsigned_abs() > i64::MAX as u64 / 2 {
            return Bs::Huge;
        }
        Bs::from_element(&x.mul(&y))
    }

    pub fn inv(&self) -> Bs {
        if let Bs::Small(x) = self {
            if let Some(z) = x.inv() {
                return Bs::Small(z);
            }
        }
        match self.to_element() {
            Some(g) if g.m.unsigned_abs() <= i64::MAX as u64 / 2 => Bs::from_element(&g.inv()),
            _ => Bs::Huge,
        }
    }

    fn m(&self) -> Option<i64> {
        match self {
            Bs::Small(s) => Some(s.m),
            Bs::Big(g) => Some(g.m),
            Bs::Huge => None,
        }
    }

    fn r_is_zero(&self) -> bool {
        match self {
            Bs::Small(s) => s.num == 0,
            Bs::Big(g) => g.r.is_zero(),
            Bs::Huge => false,
        }
    }

    fn r_is_integer(&self) -> bool {
        match self {
            Bs::Small(s) => s.num == 0 || s.exp >= 0,
            Bs::Big(g) => g.r.is_integer(),
            Bs::Huge => false,
        }
    }
}

/// The Baumslag group over `H = BS(1,2)` with `A = <a>`, `B = <t>` and
/// `φ(a) = t`, generated by `Σ`.
#[derive(Clone, Copy, Debug)]
pub struct Baumslag {
    sigma: &'static [Letter],
}

impl Baumslag {
    /// `Σ = {a, a⁻¹, t, t⁻¹}`, which generates `H`; `|Δ| = 6`.
    pub fn base_generated() -> Self {
        Baumslag { sigma: &[Letter::A, Letter::AInv, Letter::T, Letter::TInv] }
    }

    /// `Σ = {a, a⁻¹}`, the two-generator presentation; `|Δ| = 4`.
    pub fn two_generator() -> Self {
        Baumslag { sigma: &[Letter::A, Letter::AInv] }
    }
}

impl HnnInstance for Baumslag {
    type Elem = Bs;

    fn name(&self) -> &'static str {
        if self.sigma.len() == 4 {
            "bg"
        } else {
            "bg-ab"
        }
    }
    fn sigma(&self) -> &[Letter] {
        self.sigma
    }
    fn regime(&self) -> Regime {
        Regime::Proper
    }
    fn identity(&self) -> Bs {
        Bs::Small(SmallBs::IDENTITY)
    }
    fn letter(&self, l: Letter) -> Bs {
        let (num, m) = match l {
            Letter::A => (1, 0),
            Letter::AInv => (-1, 0),
            Letter::T => (0, 1),
            Letter::TInv => (0, -1),
            other => panic!("{other:?} is not a base letter"),
        };
        Bs::Small(SmallBs::new(num, 0, m))
    }
    fn mul(&self, x: &Bs, y: &Bs) -> Bs {
        x.mul(y)
    }
    fn inv(&self, x: &Bs) -> Bs {
        x.inv()
    }
    fn in_a(&self, x: &Bs) -> bool {
        x.m() == Some(0) && x.r_is_integer()
    }
    fn in_b(&self, x: &Bs) -> bool {
        x.r_is_zero()
    }
    fn phi(&self, x: &Bs) -> Bs {
        assert!(self.in_a(x), "φ applied outside A");
        let r = x.to_element().and_then(|g| g.r.to_integer()).expect("integral");
        match r.to_i64() {
            Some(m) if m.unsigned_abs() <= i64::MAX as u64 / 2 => Bs::Small(SmallBs::new(0, 0, m)),
            _ => Bs::Huge,
        }
    }
    fn phi_inv(&self, x: &Bs) -> Bs {
        assert!(self.in_b(x), "φ⁻¹ applied outside B");
        Bs::Small(SmallBs::new(i128::from(x.m().expect("in B")), 0, 0))
    }
    fn is_identity(&self, x: &Bs) -> bool {
        x.r_is_zero() && x.m() == Some(0)
    }
    fn mul_letter(&self, x: &mut Bs, l: Letter) {
        if let Bs::Small(s) = x {
            // Right multiplication by a^±1 or t^±1 without the general path.
            let step = match l {
                Letter::T => Some(SmallBs { m: s.m + 1, ..*s }),
                Letter::TInv => Some(SmallBs { m: s.m - 1, ..*s }),
                _ => s.mul(&SmallBs::new(if l == Letter::A { 1 } else { -1 }, 0, 0)),
            };
            if let Some(v) = step {
                *s = v;
                return;
            }
        }
        *x = x.mul(&self.letter(l));
    }
}
