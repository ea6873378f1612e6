//! The nine conjunctive-obligation scenarios, plus the variant of the
//! iterated case, with the verdicts they are expected to produce.

use ddl_core::Verdict;

pub struct Scenario {
    pub name: &'static str,
    pub theory: &'static str,
    /// Positive goals and the verdict each must get.
    pub checks: &'static [(&'static str, Verdict)],
}

use Verdict::{Proven, Refuted};

pub const SCENARIOS: &[Scenario] = &[
    Scenario {
        name: "compensatory",
        theory: "fact ~a. r1: =O> a * b.",
        checks: &[("+dO a & b", Refuted)],
    },
    Scenario {
        name: "contrary-to-duty",
        theory: "fact ~a. r1: =O> a. r2: ~a =O> b.",
        checks: &[("+dO a & b", Refuted)],
    },
    Scenario {
        name: "intermediate-concept",
        theory: "fact ~a. r1: =O> a. r2: ~a => b. r3: b =O> c.",
        checks: &[("+dO a & c", Refuted)],
    },
    Scenario {
        name: "negative-support",
        theory: "fact ~a. r1: =O> a. r2: =O> b. r3: c =O> ~b. r4: => c. r5: ~a ~> ~c.",
        checks: &[("+dO a & b", Refuted)],
    },
    Scenario {
        name: "iterated",
        theory: "r1: =O> a. r2: =O> b. r3: O[a & b] =O> c. r4: =O> d. r5: O[c & d] => e.",
        checks: &[("+d e", Proven), ("+dO c & d", Proven)],
    },
    Scenario {
        name: "iterated-violated-d",
        theory: "fact ~d. r1: =O> a. r2: ~d =O> b. r3: O[a & b] =O> c. r4: =O> d.
                 r5: O[c & d] => e.",
        checks: &[("+dO c & d", Refuted), ("+d e", Refuted)],
    },
    Scenario {
        name: "multiple-conjuncts",
        theory: "fact ~a. fact ~b. r1: =O> a. r2: =O> b. r3: ~a, ~b =O> c.",
        checks: &[
            ("+dO a & b", Proven),
            ("+dO a & c", Refuted),
            ("+dO b & c", Refuted),
            ("+dO a & b & c", Refuted),
        ],
    },
    Scenario {
        name: "multiple-dependencies",
        theory: "fact ~a. fact ~b. r1: =O> a. r2: =O> b. r3: ~a =O> c. r4: ~b =O> c.
                 r5: O[a & c] => x. r6: O[b & c] => y. r7: O[a & b & c] => z.",
        checks: &[
            ("+dO a & c", Proven),
            ("+dO b & c", Proven),
            ("+dO a & b & c", Refuted),
            ("+d x", Proven),
            ("+d z", Refuted),
        ],
    },
    Scenario {
        name: "pragmatic-unpragmatic",
        theory: "fact ~a. r1: =O> a * b. r2: =O> b.",
        checks: &[("+dO a & b", Proven)],
    },
    Scenario {
        name: "mix-and-match",
        theory: "r1: =O> a * b. r2: =O> c * d. r3: => ~a. r4: => ~c.",
        checks: &[
            ("+dO b & d", Proven),
            ("+dO a & d", Proven),
            ("+dO b & c", Proven),
        ],
    },
];

/// Facts f1, f2, g2, f3, f7 with `r6 > r2`.
pub const RUNNING_EXAMPLE: &str = "fact f1. fact f2. fact g2. fact f3. fact f7.
    r1: f1 =O> a * b. r2: f2, g2 =O> b * c. r3: f3 => ~a. r4: d ~O> ~a.
    r5: -O[a] => ~b. r6: O[a], O[b] =O> ~c. r7: f7 => d. r6 > r2.";

pub const RUNNING_DERIVATION: &str =
    "+d f1\n+d f2\n+d g2\n+d f3\n+d f7\n+d d\n-dO a\n+dO b\n+d ~b\n+dO c\n";

pub const CONJUNCTION_EXAMPLE: &str = "fact f1. fact f2. fact f3. fact f4. fact f6. fact f7.
    r1: f1 =O> a * b. r2: f2 =O> a. r3: f3 =O> b. r4: f4 => ~a.
    r5: O[a & b] =O> ~c. r6: f6 =O> c * d. r7: f7 =O> d.";

/// Theory for the two ordered derivations of `a & b`.
pub const ORDER_THEORY: &str = "fact ~a. r1: =O> a * b. r2: =O> b.";
pub const ORDER_REJECTED: &str = "+dO a\n+d ~a\n+dO b\n+dO a & b\n";
pub const ORDER_ACCEPTED: &str = "+dO a\n+dO b\n+d ~a\n+dO a & b\n";

/// Hand-built theories where each conjunct obligation needs the other
/// conjunct's violation to be derived first.
pub const CROSS_DEPENDENT: &[&str] = &[
    "fact ~a. fact ~b. r1: ~a =O> a. r2: ~b =O> b. x: O[a & b] => z.",
    "r1: =O> a. r2: =O> b * ~a. x: O[a & b] => z.",
];
