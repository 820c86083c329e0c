use dvrgeom_core::ring::{Ring, RingMap};
use proptest::prelude::*;

fn rings() -> Vec<Ring> {
    vec![
        Ring::prime_field(7).unwrap(),
        Ring::galois_field(3, 2).unwrap(),
        Ring::galois_field(2, 3).unwrap(),
        Ring::zmod(3, 3).unwrap(),
        Ring::zmod(5, 2).unwrap(),
        Ring::power_series(2, 2, 3).unwrap(),
        Ring::power_series(3, 1, 4).unwrap(),
    ]
}

fn ring_and_elems() -> impl Strategy<Value = (Ring, u64, u64, u64)> {
    (0..rings().len(), any::<u64>(), any::<u64>(), any::<u64>()).prop_map(|(i, a, b, c)| {
        let r = rings()[i].clone();
        let n = r.size();
        (r, a % n, b % n, c % n)
    })
}

proptest! {
    #[test]
    fn commutative_ring_axioms((r, a, b, c) in ring_and_elems()) {
        prop_assert_eq!(r.add(a, b), r.add(b, a));
        prop_assert_eq!(r.mul(a, b), r.mul(b, a));
        prop_assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
        prop_assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
        prop_assert_eq!(r.add(a, r.neg(a)), r.zero());
        prop_assert_eq!(r.sub(a, b), r.add(a, r.neg(b)));
    }

    #[test]
    fn units_invert((r, a, _b, _c) in ring_and_elems()) {
        if r.is_unit(a) {
            prop_assert_eq!(r.mul(a, r.inv(a).unwrap()), r.one());
        } else {
            prop_assert!(r.inv(a).is_err());
        }
    }

    #[test]
    fn valuation_is_additive((r, a, b, _c) in ring_and_elems()) {
        prop_assume!(r.is_dvr());
        let k = r.precision();
        let ab = r.mul(a, b);
        match (r.val(a), r.val(b)) {
            (Some(va), Some(vb)) if va + vb < k => prop_assert_eq!(r.val(ab), Some(va + vb)),
            _ => prop_assert_eq!(ab, r.zero()),
        }
    }

    #[test]
    fn pi_digits_round_trip((r, a, _b, _c) in ring_and_elems()) {
        let digits = r.pi_digits(a);
        prop_assert_eq!(r.from_pi_digits(&digits), a);
        prop_assert_eq!(r.residue(a), digits.first().copied().unwrap_or(0));
    }

    #[test]
    fn unit_split((r, a, _b, _c) in ring_and_elems()) {
        prop_assume!(r.is_dvr());
        if let Some((v, u)) = r.split_unit(a) {
            prop_assert!(r.is_unit(u));
            prop_assert_eq!(r.mul(r.pow(r.pi().unwrap(), v as u64), u), a);
        } else {
            prop_assert_eq!(a, r.zero());
        }
    }
}

#[test]
fn unramified_extension_is_a_homomorphism() {
    for base in [Ring::prime_field(3).unwrap(), Ring::galois_field(2, 2).unwrap(), Ring::power_series(2, 1, 3).unwrap()] {
        let (ext, map) = base.extend_unramified(2).unwrap();
        assert_eq!(ext.residue_order(), base.residue_order().pow(2));
        for a in base.elements() {
            for b in base.elements() {
                assert_eq!(map.apply(base.add(a, b)), ext.add(map.apply(a), map.apply(b)));
                assert_eq!(map.apply(base.mul(a, b)), ext.mul(map.apply(a), map.apply(b)));
            }
        }
    }
}

#[test]
fn subfield_embeddings_agree_on_images() {
    let f4 = Ring::galois_field(2, 2).unwrap();
    let f16 = Ring::galois_field(2, 4).unwrap();
    let emb = RingMap::field_embedding(&f4, &f16).unwrap();
    let image: std::collections::BTreeSet<u64> = f4.elements().map(|a| emb.apply(a)).collect();
    assert_eq!(image.len(), 4);
    // the image is exactly the fixed field of the square of Frobenius
    let fixed: std::collections::BTreeSet<u64> = f16.elements().filter(|&a| f16.pow(a, 4) == a).collect();
    assert_eq!(image, fixed);
}

#[test]
fn ring_descriptors_round_trip() {
    for r in rings() {
        assert_eq!(Ring::parse(&r.to_string()).unwrap(), r);
    }
    assert!(Ring::parse("Zmod(4^2)").is_err());
}

#[test]
fn mixed_characteristic_extension_is_unsupported() {
    let r = Ring::zmod(3, 2).unwrap();
    assert!(r.extend_unramified(2).is_err());
    assert!(Ring::zmod(3, 1).unwrap().extend_unramified(2).is_ok());
}
