use proptest::prelude::*;
use trotterforge::schedule::{
    check_order_conditions, closed_form_total_time, level_fractions, merged_factor_count,
    recursion_levels, suzuki, ProductSchedule,
};

fn arity() -> impl Strategy<Value = usize> {
    prop_oneof![Just(3usize), Just(5), Just(7)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn layer_sums_are_one(k in 1usize..=4, m in 1usize..=6, r in arity()) {
        let s = suzuki(k, m, r).unwrap();
        for (j, sum) in s.layer_sums().iter().enumerate() {
            prop_assert!((sum - 1.0).abs() < 1e-12, "layer {j} sums to {sum}");
        }
    }

    #[test]
    fn schedules_are_palindromes(k in 1usize..=4, m in 1usize..=6, r in arity()) {
        let s = suzuki(k, m, r).unwrap();
        prop_assert!(s.is_palindrome());
        let reversed: Vec<_> = s.entries().iter().rev().cloned().collect();
        prop_assert_eq!(reversed.as_slice(), s.entries());
        prop_assert!(s.merge_adjacent().is_palindrome());
    }

    #[test]
    fn merged_counts(k in 2usize..=3, levels in 0usize..=5, r in prop_oneof![Just(3usize), Just(5)]) {
        let m = 2 * levels + 1;
        let merged = suzuki(k, m, r).unwrap().merge_adjacent();
        prop_assert_eq!(merged.len(), r.pow(levels as u32) * (2 * k - 2) + 1);
        prop_assert_eq!(merged.len(), merged_factor_count(k, m, r));
    }

    #[test]
    fn total_time_closed_form(k in 1usize..=4, m in 1usize..=11, r in arity()) {
        let s = suzuki(k, m, r).unwrap();
        let expected = closed_form_total_time(k, m, r).unwrap();
        prop_assert!((s.total_absolute_time() - expected).abs() <= 1e-10 * expected);
    }

    #[test]
    fn every_level_meets_order_conditions(m in 1usize..=6, r in arity()) {
        for level in 1..=recursion_levels(m).max(1) {
            let c = check_order_conditions(&level_fractions(level, r).unwrap(), level);
            prop_assert!(c.satisfied(1e-10), "level {level}: {c:?}");
        }
    }

    #[test]
    fn reverse_then_forward_cancels(k in 1usize..=4, m in 1usize..=6, r in arity()) {
        let s = suzuki(k, m, r).unwrap();
        let round_trip = s.reverse().compose(&s).unwrap().merge_adjacent();
        prop_assert!(round_trip.is_empty(), "left over: {round_trip}");
    }

    #[test]
    fn even_labels_alias_odd(k in 1usize..=3, m in 1usize..=3, r in arity()) {
        let odd = suzuki(k, 2 * m - 1, r).unwrap();
        let even = suzuki(k, 2 * m, r).unwrap();
        prop_assert_eq!(odd.entries(), even.entries());
    }

    #[test]
    fn export_round_trip(k in 1usize..=3, m in 1usize..=5, r in arity()) {
        let s = suzuki(k, m, r).unwrap();
        let mut buf = Vec::new();
        s.write_to(&mut buf).unwrap();
        prop_assert_eq!(ProductSchedule::read_from(buf.as_slice()).unwrap(), s);
    }
}

#[test]
fn fractal_counts_at_order_nine() {
    let r3 = suzuki(2, 9, 3).unwrap().merge_adjacent().len();
    let r5 = suzuki(2, 9, 5).unwrap().merge_adjacent().len();
    assert_eq!((r3, r5), (163, 1251));
    assert!((r5 as f64 / r3 as f64 - 7.674846625766871).abs() < 1e-12);
}
