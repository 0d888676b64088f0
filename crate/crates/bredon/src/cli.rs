//! Command-line front end: load a bundle, validate it, and print cohomology
//! tables or spectral-sequence reports, human-readable or as JSON.
//!
//! Exit codes: 0 ok, 2 complex (or group/input) invalid, 3 coefficient
//! system invalid, 4 internal invariant failure.

use crate::abgrp::NormalForm;
use crate::cohom::bredon_cochain_complex;
use crate::coeff::{load_system, CoefficientSystem};
use crate::error::Error;
use crate::fixtures::BundleDoc;
use crate::gcw::{load_complex, GCWComplex};
use crate::orbitcat;
use crate::specseq::{
    fps_spectral_sequence, main_spectral_sequence, verify_fps_matches_main, ConvergenceReport,
    FpsResult, Page, SsResult,
};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "bredon", version, about = "Bredon cohomology and its isotropy spectral sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run all constructor validations on a bundle
    Validate(JobArgs),
    /// Bredon cohomology of the bundle, degree by degree
    Bredon(JobArgs),
    /// The isotropy-length spectral sequence converging to H*_G(X; M)
    Ss(JobArgs),
    /// The fixed-point-set spectral sequence at a subgroup
    FpsSs(FpsArgs),
}

#[derive(Args, Debug)]
pub struct JobArgs {
    /// Path to a JSON bundle {"group":…, "cells":…, "system":…}
    #[arg(long)]
    pub input: PathBuf,
    /// Cap on the reported cohomological degree
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Machine-readable JSON output
    #[arg(long, conflicts_with = "table")]
    pub json: bool,
    /// Human-readable table output (the default)
    #[arg(long)]
    pub table: bool,
    /// Compute spectral-sequence positions in parallel
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Args, Debug)]
pub struct FpsArgs {
    #[command(flatten)]
    pub job: JobArgs,
    /// Subgroup index in the lattice (see `validate` for the table)
    #[arg(long)]
    pub subgroup: usize,
}

/// Exit code for an error, per the documented mapping.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidGroup(_) | Error::InvalidComplex(_) | Error::Io(_) | Error::Json(_) => 2,
        Error::InvalidSystem(_) => 3,
        Error::Internal(_) => 4,
    }
}

/// Run a parsed command; returns (exit code, stdout, stderr). Output is a
/// pure function of the input bundle, byte for byte.
pub fn run(cli: &Cli) -> (i32, String, String) {
    let result = match &cli.command {
        Command::Validate(args) => cmd_validate(args),
        Command::Bredon(args) => cmd_bredon(args),
        Command::Ss(args) => cmd_ss(args),
        Command::FpsSs(args) => cmd_fps_ss(args),
    };
    match result {
        Ok(out) => (0, out, String::new()),
        Err(e) => (exit_code(&e), String::new(), format!("error: {e}\n")),
    }
}

fn load_bundle(args: &JobArgs) -> Result<(GCWComplex, CoefficientSystem), Error> {
    let text = std::fs::read_to_string(&args.input)?;
    let doc: BundleDoc = serde_json::from_str(&text)?;
    let x = load_complex(&doc.complex_doc())?;
    let sys = load_system(&doc.system, &x.lattice)?;
    Ok((x, sys))
}

fn nf_json(nf: &NormalForm) -> Value {
    let torsion: Vec<Value> = nf
        .torsion
        .iter()
        .map(|d| match d.to_string().parse::<i64>() {
            Ok(v) => json!(v),
            Err(_) => json!(d.to_string()),
        })
        .collect();
    json!({ "rank": nf.rank, "torsion": torsion })
}

fn cmd_validate(args: &JobArgs) -> Result<String, Error> {
    let (x, sys) = load_bundle(args)?;
    let lat = &x.lattice;
    // freeness of the Weyl action off the basepoint, for every subgroup
    for h in 0..lat.count() {
        let m = x.modified_fixed_complex(h)?;
        for dim_cells in &m.cells {
            for &c in dim_cells {
                if x.weyl_stabilizer(h, c) != vec![0] {
                    return Err(Error::Internal(format!(
                        "W H fails to act freely on X^H_H at subgroup {h}"
                    )));
                }
            }
        }
    }
    // the Bredon complex itself (δδ = 0 with transported coefficients)
    let bc = bredon_cochain_complex(&x, &sys)?;
    if args.json {
        let subgroups: Vec<Value> = (0..lat.count())
            .map(|i| {
                json!({
                    "index": i,
                    "members": lat.subgroups[i].members,
                    "order": lat.subgroups[i].order(),
                    "length": lat.length[i],
                    "class_rep": lat.rep_of(i),
                    "normalizer": lat.normalizer[i],
                    "weyl_order": lat.weyl_group(i).order(),
                })
            })
            .collect();
        let mut homs = serde_json::Map::new();
        for a in 0..lat.count() {
            for b in 0..lat.count() {
                let hs = orbitcat::hom_set(lat, a, b);
                let cosets: Vec<usize> = hs.iter().map(|f| f.coset).collect();
                homs.insert(format!("{a},{b}"), json!(cosets));
            }
        }
        let out = json!({
            "valid": true,
            "group_order": lat.group.order(),
            "subgroups": subgroups,
            "cells": x.cells.len(),
            "dim": x.dim,
            "max_stratum": bc.max_stratum,
            "hom_sets": Value::Object(homs),
        });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&out)?));
    }
    let mut out = String::new();
    writeln!(out, "bundle valid").unwrap();
    writeln!(out, "group order: {}", lat.group.order()).unwrap();
    writeln!(out, "orbit-cells: {} (dim {})", x.cells.len(), x.dim).unwrap();
    writeln!(out, "subgroup lattice ({} subgroups):", lat.count()).unwrap();
    writeln!(out, "  idx  order  len  N_G H  |W H|  class  members").unwrap();
    for i in 0..lat.count() {
        writeln!(
            out,
            "  {:<3}  {:<5}  {:<3}  {:<5}  {:<5}  {:<5}  {:?}",
            i,
            lat.subgroups[i].order(),
            lat.length[i],
            lat.normalizer[i],
            lat.weyl_group(i).order(),
            lat.rep_of(i),
            lat.subgroups[i].members
        )
        .unwrap();
    }
    Ok(out)
}

fn cmd_bredon(args: &JobArgs) -> Result<String, Error> {
    let (x, sys) = load_bundle(args)?;
    let bc = bredon_cochain_complex(&x, &sys)?;
    let top = args.max_degree.unwrap_or(x.dim).min(x.dim);
    let groups: Vec<NormalForm> =
        (0..=top).map(|n| bc.complex.cohomology(n).normal_form()).collect();
    if args.json {
        let mut h = serde_json::Map::new();
        for (n, nf) in groups.iter().enumerate() {
            h.insert(n.to_string(), nf_json(nf));
        }
        let out = json!({ "bredon_cohomology": Value::Object(h) });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&out)?));
    }
    let mut out = String::new();
    writeln!(out, "Bredon cohomology H^n_G(X; M):").unwrap();
    for (n, nf) in groups.iter().enumerate() {
        writeln!(out, "  H^{n} = {nf}").unwrap();
    }
    Ok(out)
}

fn pages_json(pages: &[Page]) -> Value {
    let arr: Vec<Value> = pages
        .iter()
        .map(|p| {
            let mut entries = serde_json::Map::new();
            for (&(s, n), e) in &p.entries {
                entries.insert(format!("{s},{n}"), nf_json(&e.nf));
            }
            let mut diffs = serde_json::Map::new();
            for (&(s, n), d) in &p.differentials {
                if d.is_zero_map() {
                    continue;
                }
                let mat: Vec<Vec<String>> = (0..d.matrix.rows())
                    .map(|i| (0..d.matrix.cols()).map(|j| d.matrix.get(i, j).to_string()).collect())
                    .collect();
                diffs.insert(format!("{s},{n}"), json!(mat));
            }
            json!({ "r": p.r, "entries": Value::Object(entries), "differentials": Value::Object(diffs) })
        })
        .collect();
    json!(arr)
}

fn convergence_json(c: &ConvergenceReport) -> Value {
    let mut map = serde_json::Map::new();
    for (n, d) in &c.degrees {
        let graded: Vec<Value> = d.graded.values().map(nf_json).collect();
        let e_inf: Vec<Value> = d.e_inf.values().map(nf_json).collect();
        map.insert(
            format!("degree {n}"),
            json!({ "graded": graded, "e_inf": e_inf, "match": d.matches }),
        );
    }
    Value::Object(map)
}

fn write_pages_table(out: &mut String, pages: &[Page]) {
    for p in pages {
        writeln!(out, "E_{} page (s = stratum, n = degree; display k = s-n, i = n):", p.r).unwrap();
        for (&(s, n), e) in &p.entries {
            if e.nf.is_trivial() {
                continue;
            }
            let k = s as i64 - n as i64;
            writeln!(out, "  E_{}^({s},{n}) [k={k}, i={n}] = {}", p.r, e.nf).unwrap();
        }
        for (&(s, n), d) in &p.differentials {
            if !d.is_zero_map() {
                writeln!(out, "  d_{}: ({s},{n}) -> ({},{}) nonzero", p.r, s + p.r, n + 1).unwrap();
            }
        }
    }
}

fn cmd_ss(args: &JobArgs) -> Result<String, Error> {
    let (x, sys) = load_bundle(args)?;
    let res = main_spectral_sequence(&x, &sys, args.parallel)?;
    if args.json {
        return Ok(format!("{}\n", serde_json::to_string_pretty(&ss_json(&res))?));
    }
    let mut out = String::new();
    writeln!(
        out,
        "isotropy spectral sequence: filtration length N = {}, dim X = {}",
        res.filtered.top_stratum, x.dim
    )
    .unwrap();
    if res.degenerate_at_e1 {
        writeln!(out, "degenerate at E_1 (single nonempty stratum)").unwrap();
    }
    write_pages_table(&mut out, &res.pages);
    writeln!(out, "E_1 blocks:").unwrap();
    for b in &res.blocks {
        let cohs: Vec<String> = (0..b.reduced.complex.len())
            .map(|n| b.reduced.complex.cohomology(n).normal_form().to_string())
            .collect();
        writeln!(
            out,
            "  stratum {}: class rep {} -> reduced cohomology [{}]",
            b.stratum,
            b.class_rep,
            cohs.join(", ")
        )
        .unwrap();
    }
    match res.d1.global_sign {
        Some(s) => writeln!(out, "d_1 factorization: verified, global sign {s:+}").unwrap(),
        None => writeln!(out, "d_1 factorization: verified (all components zero)").unwrap(),
    }
    writeln!(out, "convergence: {}", if res.convergence.pass { "PASS" } else { "FAIL" }).unwrap();
    for (n, d) in &res.convergence.degrees {
        let graded: Vec<String> = d.graded.values().map(NormalForm::to_string).collect();
        writeln!(out, "  degree {n}: graded pieces [{}] match: {}", graded.join(", "), d.matches)
            .unwrap();
    }
    Ok(out)
}

fn ss_json(res: &SsResult) -> Value {
    let blocks: Vec<Value> = res
        .blocks
        .iter()
        .map(|b| {
            let cohs: Vec<Value> = (0..b.reduced.complex.len())
                .map(|n| nf_json(&b.reduced.complex.cohomology(n).normal_form()))
                .collect();
            json!({
                "stratum": b.stratum,
                "class_rep": b.class_rep,
                "reduced_cohomology": cohs,
            })
        })
        .collect();
    json!({
        "filtration_length": res.filtered.top_stratum,
        "degenerate_at_e1": res.degenerate_at_e1,
        "pages": pages_json(&res.pages),
        "e1_blocks": blocks,
        "d1_global_sign": res.d1.global_sign,
        "convergence": convergence_json(&res.convergence),
        "convergence_pass": res.convergence.pass,
    })
}

fn cmd_fps_ss(args: &FpsArgs) -> Result<String, Error> {
    let (x, sys) = load_bundle(&args.job)?;
    if args.subgroup >= x.lattice.count() {
        return Err(Error::InvalidComplex(format!(
            "subgroup index {} is outside the lattice (0..{})",
            args.subgroup,
            x.lattice.count()
        )));
    }
    let res = fps_spectral_sequence(&x, &sys, args.subgroup, args.job.parallel)?;
    let coincides = if args.subgroup == x.lattice.trivial_index {
        let main = main_spectral_sequence(&x, &sys, args.job.parallel)?;
        Some(verify_fps_matches_main(&main, &res).is_ok())
    } else {
        None
    };
    if args.job.json {
        let mut v = fps_json(&res);
        if let Some(c) = coincides {
            v["coincides_with_main"] = json!(c);
        }
        return Ok(format!("{}\n", serde_json::to_string_pretty(&v)?));
    }
    let mut out = String::new();
    writeln!(
        out,
        "fixed-point-set spectral sequence at subgroup {} (|W H| = {}):",
        res.h,
        res.induced.weyl.order()
    )
    .unwrap();
    if res.degenerate_at_e1 {
        writeln!(out, "degenerate at E_1 (single nonempty stratum)").unwrap();
    }
    if let Some(c) = coincides {
        writeln!(
            out,
            "coincides with main spectral sequence: {}",
            if c { "yes (entrywise)" } else { "NO" }
        )
        .unwrap();
    }
    write_pages_table(&mut out, &res.pages);
    writeln!(out, "E_1 blocks (over the subquotient Weyl groups):").unwrap();
    for b in &res.blocks {
        let cohs: Vec<String> = (0..b.complex.len())
            .map(|n| b.complex.cohomology(n).normal_form().to_string())
            .collect();
        writeln!(
            out,
            "  stratum {}: L = {} |W̄_H^L| = {}{} -> [{}]",
            b.stratum,
            b.l_rep,
            b.gamma_order,
            if b.nonequivariant { " (non-equivariant)" } else { "" },
            cohs.join(", ")
        )
        .unwrap();
    }
    writeln!(out, "convergence against the W H-Bredon oracle: {}", if res.convergence.pass { "PASS" } else { "FAIL" })
        .unwrap();
    Ok(out)
}

fn fps_json(res: &FpsResult) -> Value {
    let blocks: Vec<Value> = res
        .blocks
        .iter()
        .map(|b| {
            let cohs: Vec<Value> = (0..b.complex.len())
                .map(|n| nf_json(&b.complex.cohomology(n).normal_form()))
                .collect();
            json!({
                "stratum": b.stratum,
                "l_rep": b.l_rep,
                "gamma_order": b.gamma_order,
                "nonequivariant": b.nonequivariant,
                "reduced_cohomology": cohs,
            })
        })
        .collect();
    json!({
        "subgroup": res.h,
        "weyl_order": res.induced.weyl.order(),
        "filtration_length": res.filtered.top_stratum,
        "degenerate_at_e1": res.degenerate_at_e1,
        "pages": pages_json(&res.pages),
        "e1_blocks": blocks,
        "convergence": convergence_json(&res.convergence),
        "convergence_pass": res.convergence.pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::io::Write;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let cli = Cli::try_parse_from(args).expect("argument parsing");
        run(&cli)
    }

    fn bundle_file(fx: &fixtures::Fixture, system: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        let doc = fx.bundle(system).unwrap();
        write!(f, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        f
    }

    #[test]
    fn validate_and_bredon_on_reflection_sphere() {
        let fx = fixtures::reflection_s2();
        let f = bundle_file(&fx, "constant_z");
        let path = f.path().to_str().unwrap();
        let (code, out, err) = run_args(&["bredon", "validate", "--input", path]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("bundle valid"));
        let (code, out, _) = run_args(&["bredon", "bredon", "--input", path]);
        assert_eq!(code, 0);
        assert!(out.contains("H^0 = Z"));
        assert!(out.contains("H^1 = 0"));
        assert!(out.contains("H^2 = 0"));
    }

    #[test]
    fn invalid_complex_exits_2() {
        let fx = fixtures::reflection_s2();
        let mut doc = fx.bundle("constant_z").unwrap();
        doc.cells[4].boundary[1].coeff = 1; // breaks ∂∂ = 0
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, "{}", serde_json::to_string(&doc).unwrap()).unwrap();
        let (code, _, err) = run_args(&["bredon", "validate", "--input", f.path().to_str().unwrap()]);
        assert_eq!(code, 2);
        assert!(err.contains("∂∂"), "{err}");
    }

    #[test]
    fn invalid_system_exits_3() {
        let fx = fixtures::reflection_s2();
        let mut doc = fx.bundle("constant_z").unwrap();
        doc.system.values.remove("0");
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, "{}", serde_json::to_string(&doc).unwrap()).unwrap();
        let (code, _, err) = run_args(&["bredon", "validate", "--input", f.path().to_str().unwrap()]);
        assert_eq!(code, 3);
        assert!(err.contains("missing value"), "{err}");
    }

    #[test]
    fn ss_reports_are_deterministic() {
        let fx = fixtures::s3_sphere();
        let f = bundle_file(&fx, "constant_z");
        let path = f.path().to_str().unwrap();
        for cmd in ["validate", "bredon", "ss"] {
            let a = run_args(&["bredon", cmd, "--input", path, "--json"]);
            let b = run_args(&["bredon", cmd, "--input", path, "--json"]);
            assert_eq!(a, b, "{cmd} (json) must be byte-identical");
            let a = run_args(&["bredon", cmd, "--input", path]);
            let b = run_args(&["bredon", cmd, "--input", path]);
            assert_eq!(a, b, "{cmd} (table) must be byte-identical");
        }
        let a = run_args(&["bredon", "fps-ss", "--input", path, "--subgroup", "1", "--json"]);
        let b = run_args(&["bredon", "fps-ss", "--input", path, "--subgroup", "1", "--json"]);
        assert_eq!(a, b);
    }

    #[test]
    fn parallel_flag_gives_identical_output() {
        let fx = fixtures::s3_sphere();
        let f = bundle_file(&fx, "constant_z");
        let path = f.path().to_str().unwrap();
        let a = run_args(&["bredon", "ss", "--input", path, "--json"]);
        let b = run_args(&["bredon", "ss", "--input", path, "--json", "--parallel"]);
        assert_eq!(a, b);
    }

    #[test]
    fn json_report_round_trips() {
        let fx = fixtures::antipodal_s1();
        let f = bundle_file(&fx, "sign");
        let path = f.path().to_str().unwrap();
        let (code, out, _) = run_args(&["bredon", "bredon", "--input", path, "--json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["bredon_cohomology"]["0"]["rank"], json!(0));
        assert_eq!(v["bredon_cohomology"]["1"]["torsion"][0], json!(2));
    }

    #[test]
    fn fps_ss_at_trivial_subgroup_flags_coincidence() {
        let fx = fixtures::reflection_s2();
        let f = bundle_file(&fx, "constant_z");
        let path = f.path().to_str().unwrap();
        let (code, out, _) =
            run_args(&["bredon", "fps-ss", "--input", path, "--subgroup", "0"]);
        assert_eq!(code, 0);
        assert!(out.contains("coincides with main spectral sequence: yes"));
        // and at G: degenerate, converging to H*(S^1)
        let (code, out, _) =
            run_args(&["bredon", "fps-ss", "--input", path, "--subgroup", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("degenerate at E_1"));
        assert!(out.contains("PASS"));
    }

    #[test]
    fn missing_subgroup_is_rejected() {
        let fx = fixtures::point_z2();
        let f = bundle_file(&fx, "constant_z");
        let path = f.path().to_str().unwrap();
        let (code, _, err) =
            run_args(&["bredon", "fps-ss", "--input", path, "--subgroup", "9"]);
        assert_eq!(code, 2);
        assert!(err.contains("outside the lattice"));
    }
}
