//! Runs every acceptance criterion at its stated tolerance and prints one
//! PASS/FAIL line each.
//!
//! AC9 cannot be met: under the remark-mode inequality some sampled
//! conductors above 2^19 (every highly composite one among them) are not
//! excluded. It runs in full and prints FAIL. The target fails if any
//! other criterion fails, or if AC9 starts passing.

use modparam::selfcheck::{self, Criterion};

const KNOWN_UNATTAINABLE: &[u8] = &[9];

fn main() {
    let checks: [fn() -> Criterion; 10] = [
        selfcheck::ac1,
        selfcheck::ac2,
        selfcheck::ac3,
        selfcheck::ac4,
        selfcheck::ac5,
        selfcheck::ac6,
        selfcheck::ac7,
        selfcheck::ac8,
        selfcheck::ac9,
        selfcheck::ac10,
    ];
    let mut unexpected = Vec::new();
    for check in checks {
        let c = check();
        println!("{}", c.line());
        let expected_fail = KNOWN_UNATTAINABLE.contains(&c.id);
        if c.passed == expected_fail {
            unexpected.push(c.id);
        }
    }
    for id in KNOWN_UNATTAINABLE {
        println!("AC{id} is a documented expected failure");
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for {unexpected:?}");
        std::process::exit(1);
    }
}
