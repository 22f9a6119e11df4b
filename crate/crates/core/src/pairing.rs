//! Cantor pairing on arbitrary-precision naturals.
//!
//! `pair(a, b) = (a + b)(a + b + 1)/2 + a`. Both directions are total and mutually
//! inverse, which is what the term and machine numberings lean on.

use crate::Nat;
use num_traits::One;

/// Bijection from pairs of naturals onto the naturals.
pub fn pair(a: &Nat, b: &Nat) -> Nat {
    let s = a + b;
    (&s * (&s + Nat::one())) / 2u32 + a
}

/// Inverse of [`pair`].
pub fn unpair(z: &Nat) -> (Nat, Nat) {
    // w = floor((sqrt(8z + 1) - 1) / 2) is the diagonal index, t its triangle number.
    let root = (z * 8u32 + Nat::one()).sqrt();
    let w = (root - Nat::one()) / 2u32;
    let t = (&w * (&w + Nat::one())) / 2u32;
    let a = z - &t;
    let b = &w - &a;
    (a, b)
}

/// Packs a nonempty fixed-length tuple by iterated pairing, left fold from the right:
/// `pack([x]) = x`, `pack([x, rest..]) = pair(x, pack(rest))`.
pub fn pack(parts: &[Nat]) -> Nat {
    assert!(!parts.is_empty(), "pack requires a nonempty tuple");
    let mut acc = parts[parts.len() - 1].clone();
    for part in parts[..parts.len() - 1].iter().rev() {
        acc = pair(part, &acc);
    }
    acc
}

/// Inverse of [`pack`] for a known tuple length `len >= 1`.
pub fn unpack(z: &Nat, len: usize) -> Vec<Nat> {
    assert!(len >= 1, "unpack requires a positive tuple length");
    let mut out = Vec::with_capacity(len);
    let mut rest = z.clone();
    for _ in 0..len - 1 {
        let (head, tail) = unpair(&rest);
        out.push(head);
        rest = tail;
    }
    out.push(rest);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;
    use proptest::prelude::*;

    #[test]
    fn base_cases() {
        assert_eq!(pair(&nat(0), &nat(0)), nat(0));
        assert_eq!(unpair(&nat(0)), (nat(0), nat(0)));
        // First few diagonals, frozen by hand from the closed form.
        assert_eq!(pair(&nat(0), &nat(1)), nat(1));
        assert_eq!(pair(&nat(1), &nat(0)), nat(2));
        assert_eq!(pair(&nat(0), &nat(2)), nat(3));
        assert_eq!(pair(&nat(1), &nat(1)), nat(4));
        assert_eq!(pair(&nat(2), &nat(0)), nat(5));
    }

    #[test]
    fn dense_roundtrip() {
        for z in 0u64..2000 {
            let (a, b) = unpair(&nat(z));
            assert_eq!(pair(&a, &b), nat(z));
        }
    }

    #[test]
    fn pack_matches_nested_pair() {
        let parts = [nat(3), nat(1), nat(4)];
        assert_eq!(pack(&parts), pair(&nat(3), &pair(&nat(1), &nat(4))));
        assert_eq!(unpack(&pack(&parts), 3), parts.to_vec());
    }

    proptest! {
        #[test]
        fn pair_unpair_inverse(a in 0u64..1 << 40, b in 0u64..1 << 40) {
            let z = pair(&nat(a), &nat(b));
            prop_assert_eq!(unpair(&z), (nat(a), nat(b)));
        }

        #[test]
        fn unpair_pair_inverse(z in 0u64..1 << 48) {
            let (a, b) = unpair(&nat(z));
            prop_assert_eq!(pair(&a, &b), nat(z));
        }

        #[test]
        fn tuple_roundtrip(parts in proptest::collection::vec(0u64..1 << 30, 1..6)) {
            let parts: Vec<Nat> = parts.into_iter().map(nat).collect();
            prop_assert_eq!(unpack(&pack(&parts), parts.len()), parts);
        }
    }
}
