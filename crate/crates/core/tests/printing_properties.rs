use proptest::prelude::*;

use lambdajs::delta::{number_to_string, string_to_number};
use lambdajs::syntax::{build, parse_expr, print_expr};

proptest! {
    #[test]
    fn finite_numbers_survive_conversion_to_strings(n in any::<f64>().prop_filter("finite", |n| n.is_finite())) {
        let back = string_to_number(&number_to_string(n));
        prop_assert!(back == n, "{n} -> {} -> {back}", number_to_string(n));
    }

    #[test]
    fn string_constants_read_back(s in ".*") {
        let e = build::update(build::object(vec![(s.as_str(), build::str(&s))]), build::str(&s), build::null());
        let printed = print_expr(&e);
        let reread = parse_expr(&printed).unwrap();
        prop_assert_eq!(print_expr(&reread), printed);
        prop_assert_eq!(reread, e);
    }
}
