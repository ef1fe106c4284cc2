//! The verification battery run by `pzero verify`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curves::{genus, rational_points, two_rank, verify_automorphisms, CurveSpec};
use crate::error::{Error, Result};
use crate::lingrp::{
    build, build_su3_matrix, expected_order, stabilizer_constants, Family, FamilyId,
};
use crate::perm::{classify_theorem1, is_ti_subgroup, sample_involutions, Case, SEED};
use crate::spectrum::{bound_checks, crosscheck_gqfpf, enumerate_spectrum, quotient_consistency};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Groups,
    Curves,
    Spectrum,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "groups" => Ok(Suite::Groups),
            "curves" => Ok(Suite::Curves),
            "spectrum" => Ok(Suite::Spectrum),
            other => Err(Error::InvalidFamily(format!("unknown suite '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub suite: Suite,
    pub quick: bool,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifySummary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

fn record(out: &mut Vec<CheckResult>, name: String, r: Result<(bool, String)>) {
    let (passed, detail) = match r {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    out.push(CheckResult {
        name,
        passed,
        detail,
    });
}

/// Built groups checked by the battery; `quick` drops n = 32.
pub fn group_grid(quick: bool) -> Vec<FamilyId> {
    let mut v = vec![
        (Family::PSL2, 4),
        (Family::PSL2, 8),
        (Family::SZ, 8),
        (Family::PGU3, 4),
        (Family::PSU3, 4),
    ];
    v.extend([(Family::PGU3, 8), (Family::PSU3, 8)]);
    if !quick {
        v.push((Family::SZ, 32));
    }
    v.into_iter()
        .map(|(f, n)| FamilyId::new(f, n).expect("valid grid"))
        .collect()
}

fn groups(quick: bool, out: &mut Vec<CheckResult>) {
    for f in group_grid(quick) {
        let a = match build(&f) {
            Ok(a) => a,
            Err(e) => {
                record(out, format!("{f} build"), Err(e));
                continue;
            }
        };
        let g = &a.group;
        let c = stabilizer_constants(&f);
        record(
            out,
            format!("{f} order"),
            g.order().map(|o| (o == expected_order(&f), o.to_string())),
        );
        record(
            out,
            format!("{f} 2-transitive"),
            g.is_two_transitive().map(|b| (b, String::new())),
        );
        record(
            out,
            format!("{f} stabilizer"),
            g.stabilizer(a.infinity)
                .and_then(|s| s.order())
                .map(|o| (o == c.sp, o.to_string())),
        );
        record(
            out,
            format!("{f} sylow TI"),
            a.sylow2_group()
                .and_then(|s| is_ti_subgroup(g, &s))
                .map(|b| (b, String::new())),
        );
        record(
            out,
            format!("{f} involutions fix one point"),
            sample_involutions(g, 1000, SEED).map(|inv| {
                let bad = inv.iter().filter(|t| t.fixed_points().len() != 1).count();
                (bad == 0, format!("{} sampled, {bad} bad", inv.len()))
            }),
        );
        if f.n <= 8 {
            record(
                out,
                format!("{f} classification"),
                classify_theorem1(g).map(|r| {
                    let expect = if f.name == Family::PGU3 {
                        Family::PSU3
                    } else {
                        f.name
                    };
                    let ok = r.case == Case::LinearFamily
                        && r.family_guess
                            .as_ref()
                            .is_some_and(|x| x.name == expect.to_string() && x.n == f.n);
                    (ok, format!("{:?}", r.family_guess))
                }),
            );
        }
    }
    if !quick {
        for n in [4u64, 8] {
            record(
                out,
                format!("SU3({n}) vector action"),
                build_su3_matrix(n).map(|g| {
                    let f = FamilyId::new(Family::PGU3, n).expect("valid");
                    (g.order() == expected_order(&f), g.order().to_string())
                }),
            );
        }
    }
}

fn curves(quick: bool, out: &mut Vec<CheckResult>) {
    let mut counts = vec![
        (CurveSpec::hermitian(4), 4, 65u64),
        (CurveSpec::hermitian(8), 6, 513),
        (CurveSpec::dls(8), 3, 65),
    ];
    if !quick {
        counts.push((CurveSpec::dls(32), 5, 1025));
    }
    for (c, e, expect) in counts {
        let r = c.and_then(|c| {
            let p = rational_points(&c, e)?;
            let mut ok = p.total == expect;
            if c.family == crate::curves::CurveFamily::II {
                ok &= p.total == c.param * c.param + 1 + 2 * genus(&c) * c.param;
            }
            Ok((ok, format!("{} over F_2^{e}: {}", c.equation(), p.total)))
        });
        record(out, format!("points {expect}"), r);
    }
    for c in [
        CurveSpec::hermitian(4),
        CurveSpec::dls(8),
        CurveSpec::family_i(2),
        CurveSpec::family_i(3),
    ] {
        let r = c.and_then(|c| {
            let r = verify_automorphisms(&c)?;
            Ok((r.passed(), format!("{} order {}", c.family, r.group_order)))
        });
        record(out, "automorphisms".into(), r);
    }
    let mut grid = Vec::new();
    for k in 2..=5 {
        grid.push(CurveSpec::family_i(k));
    }
    for n in [4, 8, 16] {
        grid.push(CurveSpec::hermitian(n));
    }
    grid.push(CurveSpec::dls(8));
    grid.push(CurveSpec::dls(32));
    grid.push(CurveSpec::stich(3, 3));
    for c in grid {
        let r = c.and_then(|c| Ok((two_rank(&c)?.two_rank == 0, c.equation())));
        record(out, "two-rank zero".into(), r);
    }
}

fn spectrum(quick: bool, out: &mut Vec<CheckResult>) {
    let expected: [(Family, u64, &[i128]); 4] = [
        (Family::PSL2, 4, &[6]),
        (Family::PSL2, 8, &[7, 28]),
        (Family::SZ, 8, &[14, 196, 196]),
        (Family::PSU3, 4, &[6, 66, 456, 456]),
    ];
    for (name, n, genera) in expected {
        let r = FamilyId::new(name, n)
            .and_then(|f| enumerate_spectrum(&f))
            .map(|s| {
                let mut got = s.genera();
                got.sort();
                (got == genera, format!("{got:?}"))
            });
        record(out, format!("spectrum {name}({n})"), r);
    }
    let mut fams = vec![
        (Family::PSL2, 16),
        (Family::PSU3, 8),
        (Family::SU3, 8),
        (Family::SZ, 32),
    ];
    if !quick {
        fams.extend([(Family::PSU3, 32), (Family::SU3, 32), (Family::SZ, 128)]);
    }
    for (name, n) in fams {
        let r = FamilyId::new(name, n)
            .and_then(|f| enumerate_spectrum(&f))
            .map(|s| {
                let bad = s.entries.iter().filter(|e| !crosscheck_gqfpf(e)).count();
                (
                    bad == 0,
                    format!("{} entries, {bad} mismatches", s.entries.len()),
                )
            });
        record(out, format!("crosscheck {name}({n})"), r);
    }
    for n in [4u64, 8] {
        record(
            out,
            format!("quotients n={n}"),
            quotient_consistency(n).map(|q| (q.matches, format!("{:?}", q.quotient_genera))),
        );
    }
    for (order, g, fixes) in [
        (62400u128, 6u64, false),
        (29120, 14, false),
        (1152, 4, true),
    ] {
        record(
            out,
            format!("bounds {order} g={g}"),
            bound_checks(order, g, false, false, fixes)
                .map(|r| (r.trigger, format!("{:?}", r.route))),
        );
    }
}

pub fn run(suite: Suite, quick: bool) -> VerifySummary {
    let mut checks = Vec::new();
    if matches!(suite, Suite::All | Suite::Groups) {
        groups(quick, &mut checks);
    }
    if matches!(suite, Suite::All | Suite::Curves) {
        curves(quick, &mut checks);
    }
    if matches!(suite, Suite::All | Suite::Spectrum) {
        spectrum(quick, &mut checks);
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    VerifySummary {
        suite,
        quick,
        seed: SEED,
        passed,
        failed: checks.len() - passed,
        checks,
    }
}
