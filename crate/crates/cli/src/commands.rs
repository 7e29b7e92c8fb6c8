//! Standalone subcommands: generate, aut, tensor, wl.

use std::fs;
use std::path::Path;

use cocfg::io::{
    from_json, to_json_pretty, GroupFile, PartitionFile, PermGroupFile, SchemeFile, TensorFile,
};
use cocfg::*;

use crate::{Outcome, RunConfig, SchemeArgs};

fn usage(msg: impl Into<String>) -> Outcome {
    Outcome::UsageError(msg.into())
}

pub fn build_scheme(cfg: &RunConfig) -> Result<(PaperGroupBundle, BasicSetPartition, Scheme), Outcome> {
    let opts = BundleOptions {
        max_p: cfg.max_p,
        ..BundleOptions::default()
    };
    let bundle = build_paper_group_with(cfg.p, &opts).map_err(|e| usage(e.to_string()))?;
    let part = match cfg.fusion {
        None => paper_partition(&bundle),
        Some(level) => fusion_partition(&bundle, level),
    };
    let sch = cayley_scheme(&bundle.group, &part);
    Ok((bundle, part, sch))
}

fn write(path: &Path, text: &str) -> Result<(), Outcome> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
        }
    }
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

pub fn generate(args: &SchemeArgs, out: &Path) -> Outcome {
    let base_cfg = match RunConfig::from_args(&SchemeArgs {
        fusion: None,
        ..args.clone()
    }) {
        Ok(cfg) => cfg,
        Err(e) => return usage(e),
    };
    let (bundle, part, sch) = match build_scheme(&base_cfg) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let tensor = match IntersectionTensor::from_scheme(&sch) {
        Ok(t) => t,
        Err(e) => return usage(e.to_string()),
    };

    let result: Result<(), Outcome> = (|| {
        write(
            &out.join("group.json"),
            &to_json_pretty(&GroupFile::from_table(&bundle.group)).map_err(|e| usage(e.to_string()))?,
        )?;
        write(
            &out.join("partition.json"),
            &to_json_pretty(&PartitionFile::from_partition(&bundle.group, &part))
                .map_err(|e| usage(e.to_string()))?,
        )?;
        write(
            &out.join("scheme.json"),
            &to_json_pretty(&SchemeFile::from_scheme(&sch)).map_err(|e| usage(e.to_string()))?,
        )?;
        write(
            &out.join("tensor.json"),
            &to_json_pretty(&TensorFile::from_tensor(&tensor)).map_err(|e| usage(e.to_string()))?,
        )?;
        if let Some(token) = &args.fusion {
            let level: FusionLevel = token.parse().map_err(|e| usage(format!("{e}")))?;
            let fpart = fusion_partition(&bundle, level);
            let fsch = cayley_scheme(&bundle.group, &fpart);
            write(
                &out.join(format!("partition_f{}.json", level.token())),
                &to_json_pretty(&PartitionFile::from_partition(&bundle.group, &fpart))
                    .map_err(|e| usage(e.to_string()))?,
            )?;
            write(
                &out.join(format!("scheme_f{}.json", level.token())),
                &to_json_pretty(&SchemeFile::from_scheme(&fsch))
                    .map_err(|e| usage(e.to_string()))?,
            )?;
        }
        Ok(())
    })();
    if let Err(o) = result {
        return o;
    }
    println!(
        "generated p={}: degree {}, rank {} -> {}",
        base_cfg.p,
        sch.degree(),
        sch.rank(),
        out.display()
    );
    Outcome::Pass
}

fn load_scheme(path: &Path) -> Result<Scheme, Outcome> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let file: SchemeFile = from_json(&text).map_err(|e| usage(e.to_string()))?;
    file.into_scheme().map_err(|e| usage(e.to_string()))
}

fn scheme_from_args(args: &SchemeArgs, input: Option<&Path>) -> Result<(Scheme, Vec<Perm>, RunConfig), Outcome> {
    match input {
        Some(path) => {
            let sch = load_scheme(path)?;
            let cfg = RunConfig {
                p: 0,
                fusion: None,
                budget: args.budget,
                max_p: DEFAULT_MAX_P,
            };
            Ok((sch, Vec::new(), cfg))
        }
        None => {
            let cfg = RunConfig::from_args(args).map_err(usage)?;
            let (bundle, _, sch) = build_scheme(&cfg)?;
            let seeds = right_translation_group(&bundle.group)
                .map_err(|e| usage(e.to_string()))?;
            Ok((sch, seeds.generators().to_vec(), cfg))
        }
    }
}

pub fn aut(args: &SchemeArgs, input: Option<&Path>, out: Option<&Path>) -> Outcome {
    let (sch, seeds, cfg) = match scheme_from_args(args, input) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let group = match automorphism_group(&sch, &seeds, &cfg.limits()) {
        Ok(g) => g,
        Err(SearchError::Budget(n)) => {
            eprintln!("inconclusive: node budget {n} exhausted");
            return Outcome::Inconclusive;
        }
        Err(e) => return usage(e.to_string()),
    };
    println!(
        "automorphism group: order {}, {}",
        group.order(),
        group.regularity_class()
    );
    if let Some(path) = out {
        let text = match to_json_pretty(&PermGroupFile::from_group(&group)) {
            Ok(t) => t,
            Err(e) => return usage(e.to_string()),
        };
        if let Err(o) = write(path, &text) {
            return o;
        }
    }
    Outcome::Pass
}

pub fn tensor(args: &SchemeArgs, input: Option<&Path>, out: Option<&Path>) -> Outcome {
    let (sch, _, _) = match scheme_from_args(args, input) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let tensor = match IntersectionTensor::from_scheme(&sch) {
        Ok(t) => t,
        Err(e) => return usage(e.to_string()),
    };
    println!(
        "tensor: rank {}, {} positive entries",
        tensor.rank(),
        tensor.entry_count()
    );
    if let Some(path) = out {
        let text = match to_json_pretty(&TensorFile::from_tensor(&tensor)) {
            Ok(t) => t,
            Err(e) => return usage(e.to_string()),
        };
        if let Err(o) = write(path, &text) {
            return o;
        }
    }
    Outcome::Pass
}

pub fn wl(input: &Path, out: Option<&Path>) -> Outcome {
    let text = match fs::read_to_string(input) {
        Ok(t) => t,
        Err(e) => return usage(format!("{}: {e}", input.display())),
    };
    let file: SchemeFile = match from_json(&text) {
        Ok(f) => f,
        Err(e) => return usage(e.to_string()),
    };
    let (degree, colors) = match file.into_raw() {
        Ok(v) => v,
        Err(e) => return usage(e.to_string()),
    };
    let outcome = match wl_stabilize(degree, &colors) {
        Ok(o) => o,
        Err(e) => return usage(e.to_string()),
    };
    println!(
        "stabilized in {} rounds: rank {} -> {} (delta {})",
        outcome.rounds,
        outcome.input_rank,
        outcome.scheme.rank(),
        outcome.rank_delta()
    );
    if let Some(path) = out {
        let text = match to_json_pretty(&SchemeFile::from_scheme(&outcome.scheme)) {
            Ok(t) => t,
            Err(e) => return usage(e.to_string()),
        };
        if let Err(o) = write(path, &text) {
            return o;
        }
    }
    Outcome::Pass
}
