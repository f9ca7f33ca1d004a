use std::fmt::Debug;

/// Commutative ring elements that know their own context.
///
/// Elements carry whatever context they need (conductor, symbol list), so
/// constants are produced from an existing element rather than from nothing.
pub trait Ring: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_i64_like(&self, n: i64) -> Self;

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self = self.add_ref(rhs);
    }
}

/// Rings in which every nonzero element is invertible.
pub trait Field: Ring {
    /// `None` for zero.
    fn inv_ref(&self) -> Option<Self>;

    fn div_ref(&self, rhs: &Self) -> Option<Self> {
        rhs.inv_ref().map(|r| self.mul_ref(&r))
    }
}
