use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Result;
use hgraph::graph::{generate_rmat, generate_uniform, write_binary, write_edge_list, RmatParams};
use hgraph::model::{sweep as model_sweep, sweep_csv, validate_model, ModelParams};
use hgraph::partition::{PartitionPlan, Strategy};
use hgraph::runner::{Execution, RunSpec, Workload};
use hgraph::telemetry::{breakdown, RunReport};
use hgraph::Error;
use serde::Serialize;

use crate::config::{
    check_direction, check_graph, engine_config, format_elements, parse_elements, parse_grid, pick_source,
    ExperimentConfig, GraphConfig, Outputs, Seeds,
};
use crate::{
    ExecArgs, GenerateArgs, GeneratorKind, GraphArgs, ModelArgs, PartitionArgs, PlanArgs, RunArgs, SweepArgs,
    ValidateArgs,
};

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(io_err(path))?;
    Ok(())
}

fn read_file(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path).map_err(io_err(path))?)
}

fn print_json(value: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn graph_config(g: &GraphArgs) -> Result<GraphConfig> {
    let spec = g
        .graph
        .as_deref()
        .ok_or_else(|| Error::Configuration("--graph is required".into()))?;
    Ok(GraphConfig {
        source: spec.parse()?,
        undirected: g.undirected,
        weighted: g.weighted,
        symmetrize: g.symmetrize,
        synth_weights: g.synth_weights,
    })
}

fn seeds(p: &PlanArgs) -> Seeds {
    let mut s = Seeds::from_master(p.seed);
    if let Some(plan) = p.plan_seed {
        s.plan = plan;
    }
    s
}

fn run_spec(e: &ExecArgs) -> RunSpec {
    RunSpec {
        source: e.source.unwrap_or(0),
        iterations: e.iterations,
        damping: e.damping,
        bitmap: !e.no_bitmap,
        reduce_messages: !e.no_reduce,
        engine: engine_config(e.mode.into(), e.schedule_seed, e.interconnect, e.pace),
    }
}

pub fn generate(a: GenerateArgs, json: bool) -> Result<()> {
    let g = match a.kind {
        GeneratorKind::Rmat => generate_rmat(a.scale, a.degree, RmatParams { a: a.a, b: a.b, c: a.c }, a.seed)?,
        GeneratorKind::Uniform => generate_uniform(a.scale, a.degree, a.seed)?,
    };
    let g = if a.weights { g.with_random_weights(a.seed) } else { g };
    if a.text {
        write_edge_list(&g, &a.output)?;
    } else {
        write_binary(&g, &a.output)?;
    }
    let d = g.descriptor();
    if json {
        print_json(&d)?;
    } else {
        println!("vertices {}", d.vertex_count);
        println!("edges {}", d.edge_count);
        println!("max_degree {}", d.max_out_degree);
    }
    Ok(())
}

pub fn partition(a: PartitionArgs, json: bool) -> Result<()> {
    let seeds = seeds(&a.plan);
    let g = graph_config(&a.graph)?.load(&seeds)?;
    let w = Workload::new(a.alg, &g);
    let plan = w.plan(a.strategy, a.alpha, parse_elements(&a.plan.elements)?, seeds.plan)?;
    let summary = plan.summary(a.full);
    if let Some(path) = &a.output {
        write_file(path, &serde_json::to_string_pretty(&summary)?)?;
    }
    if json {
        let mut brief = summary;
        brief.assignment = None;
        brief.local_id = None;
        return print_json(&brief);
    }
    print_plan(&plan);
    Ok(())
}

fn print_plan(plan: &PartitionPlan) {
    println!("strategy {}", plan.strategy);
    println!("alpha_target {}", plan.alpha_target);
    println!("alpha_actual {:.6}", plan.alpha_actual);
    println!("beta_raw {:.6}", plan.beta_raw);
    println!("beta_reduced {:.6}", plan.beta_reduced);
    for (p, e) in plan.elements.iter().enumerate() {
        println!(
            "partition {p} {} vertices {} edges {} vertex_share {:.4}",
            if e.is_host() { "host" } else { "accel" },
            plan.vertex_counts[p],
            plan.edge_counts[p],
            plan.vertex_share[p]
        );
    }
}

/// Loads a config file, or the config embedded in a report.
fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let value: serde_json::Value = serde_json::from_str(&read_file(path)?)
        .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
    let value = match value.get("config") {
        Some(c) if value.get("ledger").is_some() => c.clone(),
        _ => value,
    };
    let cfg = serde_json::from_value(value)
        .map_err(|e| Error::Validation(format!("{} is not a run config: {e}", path.display())))?;
    Ok(cfg)
}

fn resolve(a: &RunArgs) -> Result<(ExperimentConfig, bool)> {
    let outputs = Outputs {
        report: a.report.clone(),
        output: a.output.clone(),
        ledger_csv: a.ledger_csv.clone(),
    };
    if let Some(path) = &a.config {
        let mut cfg = load_config(path)?;
        cfg.outputs = outputs;
        return Ok((cfg, true));
    }
    let cfg = ExperimentConfig {
        subcommand: "run".into(),
        graph: graph_config(&a.graph)?,
        algorithm: a.alg.expect("clap requires --alg without --config"),
        strategy: a.strategy,
        alpha: a.alpha,
        elements: parse_elements(&a.plan.elements)?,
        direction: a.direction.map(Into::into),
        seeds: seeds(&a.plan),
        run: run_spec(&a.exec),
        outputs,
    };
    Ok((cfg, a.exec.source.is_some()))
}

/// Loads the graph and runs the configured kernel; fills in the default source.
fn execute(cfg: &mut ExperimentConfig, source_given: bool) -> Result<Execution> {
    check_direction(cfg.algorithm, cfg.direction)?;
    let g = cfg.graph.load(&cfg.seeds)?;
    check_graph(cfg.algorithm, &g)?;
    if !source_given {
        cfg.run.source = if cfg.algorithm.needs_source() { pick_source(&g, cfg.seeds.source) } else { 0 };
    }
    let w = Workload::new(cfg.algorithm, &g);
    let plan = w.plan(cfg.strategy, cfg.alpha, cfg.elements.clone(), cfg.seeds.plan)?;
    let mut exec = w.run(&plan, &cfg.run)?;
    exec.report.config = Some(serde_json::to_value(&*cfg)?);
    Ok(exec)
}

pub fn run(a: RunArgs, json: bool) -> Result<()> {
    let (mut cfg, source_given) = resolve(&a)?;
    let exec = execute(&mut cfg, source_given)?;
    let report = &exec.report;
    if let Some(path) = &cfg.outputs.report {
        write_file(path, &report.to_json())?;
    }
    if let Some(path) = &cfg.outputs.ledger_csv {
        write_file(path, &report.ledger_csv())?;
    }
    if let (Some(path), Some(out)) = (&cfg.outputs.output, &exec.output) {
        let file = File::create(path).map_err(io_err(path))?;
        let mut w = BufWriter::new(file);
        out.write_text(&mut w)
            .and_then(|_| w.flush())
            .map_err(io_err(path))?;
    }
    if json {
        println!("{}", report.to_json());
    } else {
        print_report(report, &cfg);
    }
    match &report.aborted {
        Some(reason) => Err(Error::Aborted {
            reason: reason.clone(),
            supersteps: report.supersteps,
        }
        .into()),
        None => Ok(()),
    }
}

fn print_report(r: &RunReport, cfg: &ExperimentConfig) {
    let b = breakdown(r);
    println!("algorithm {}", r.algorithm);
    if cfg.algorithm.needs_source() {
        println!("source {}", cfg.run.source);
    }
    println!("elements {}", format_elements(&cfg.elements));
    println!("alpha_actual {:.6}", r.plan.alpha_actual);
    println!("beta_raw {:.6}", r.plan.beta_raw);
    println!("beta_reduced {:.6}", r.plan.beta_reduced);
    println!("supersteps {}", r.supersteps);
    println!("total_ms {:.3}", r.total_ms);
    println!("wall_ms {:.3}", r.wall_ms);
    println!("teps {:.4e}", r.teps);
    println!("bytes_transferred {}", r.bytes_transferred);
    println!("comm_share {:.4}", b.comm_share);
    println!("bottleneck_partition {}", b.bottleneck);
}

#[derive(Serialize)]
struct SweepRecord {
    strategy: String,
    alpha: f64,
    alpha_actual: Option<f64>,
    beta_raw: Option<f64>,
    beta_reduced: Option<f64>,
    supersteps: Option<usize>,
    total_ms: Option<f64>,
    teps: Option<f64>,
    speedup: Option<f64>,
    bytes_transferred: Option<u64>,
    comm_share: Option<f64>,
    error: String,
}

impl SweepRecord {
    fn failed(strategy: String, alpha: f64, err: impl std::fmt::Display) -> Self {
        SweepRecord {
            strategy,
            alpha,
            alpha_actual: None,
            beta_raw: None,
            beta_reduced: None,
            supersteps: None,
            total_ms: None,
            teps: None,
            speedup: None,
            bytes_transferred: None,
            comm_share: None,
            error: err.to_string(),
        }
    }

    fn of(strategy: String, alpha: f64, r: &RunReport, baseline_ms: Option<f64>) -> Self {
        SweepRecord {
            strategy,
            alpha,
            alpha_actual: Some(r.plan.alpha_actual),
            beta_raw: Some(r.plan.beta_raw),
            beta_reduced: Some(r.plan.beta_reduced),
            supersteps: Some(r.supersteps),
            total_ms: Some(r.total_ms),
            teps: Some(r.teps),
            speedup: baseline_ms.filter(|_| r.total_ms > 0.0).map(|b| b / r.total_ms),
            bytes_transferred: Some(r.bytes_transferred),
            comm_share: Some(breakdown(r).comm_share),
            error: r.aborted.clone().unwrap_or_default(),
        }
    }
}

pub fn sweep(a: SweepArgs, json: bool) -> Result<()> {
    let seeds = seeds(&a.plan);
    let alphas = parse_grid(&a.alphas)?;
    let strategies = a
        .strategies
        .split(',')
        .map(|s| s.trim().parse::<Strategy>())
        .collect::<Result<Vec<_>, _>>()?;
    let elements = parse_elements(&a.plan.elements)?;
    let g = graph_config(&a.graph)?.load(&seeds)?;
    check_graph(a.alg, &g)?;
    let mut spec = run_spec(&a.exec);
    if a.exec.source.is_none() && a.alg.needs_source() {
        spec.source = pick_source(&g, seeds.source);
    }
    let w = Workload::new(a.alg, &g);

    let host = elements.iter().find(|e| e.is_host()).cloned().expect("parse_elements checks for a host");
    let mut rows = Vec::with_capacity(1 + alphas.len() * strategies.len());
    let baseline = w.run(&w.single_plan(host), &spec);
    let baseline_ms = match &baseline {
        Ok(exec) => {
            rows.push(SweepRecord::of("baseline".into(), 1.0, &exec.report, Some(exec.report.total_ms)));
            Some(exec.report.total_ms)
        }
        Err(e) => {
            rows.push(SweepRecord::failed("baseline".into(), 1.0, e));
            None
        }
    };
    for &strategy in &strategies {
        for &alpha in &alphas {
            let row = w
                .plan(strategy, alpha, elements.clone(), seeds.plan)
                .and_then(|plan| w.run(&plan, &spec));
            rows.push(match row {
                Ok(exec) => SweepRecord::of(strategy.to_string(), alpha, &exec.report, baseline_ms),
                Err(e) => SweepRecord::failed(strategy.to_string(), alpha, e),
            });
        }
    }

    let mut csv = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        csv.serialize(r)?;
    }
    let text = String::from_utf8(csv.into_inner()?)?;
    match &a.output {
        Some(path) => write_file(path, &text)?,
        None if !json => print!("{text}"),
        None => {}
    }
    if json {
        print_json(&rows)?;
    }
    Ok(())
}

pub fn model(a: ModelArgs, json: bool) -> Result<()> {
    let template = ModelParams {
        alpha: a.alpha,
        beta: a.beta,
        c: a.c,
        r_cpu: a.rcpu,
        r_gpu: a.rgpu,
        bytes_per_edge_message: a.bytes,
    };
    let rows = model_sweep(&template, a.axis, &parse_grid(&a.grid)?)?;
    let text = sweep_csv(&rows);
    match &a.output {
        Some(path) => write_file(path, &text)?,
        None if !json => print!("{text}"),
        None => {}
    }
    if json {
        print_json(&rows)?;
    }
    Ok(())
}

fn load_report(path: &Path) -> Result<RunReport> {
    let report = serde_json::from_str(&read_file(path)?)
        .map_err(|e| Error::Validation(format!("{} is not a run report: {e}", path.display())))?;
    Ok(report)
}

pub fn validate(a: ValidateArgs, json: bool) -> Result<()> {
    let baseline = load_report(&a.baseline)?;
    let hybrid = load_report(&a.hybrid)?;
    let emulated = hybrid
        .config
        .as_ref()
        .and_then(|c| c.pointer("/run/engine/interconnect_rate"))
        .and_then(serde_json::Value::as_f64);
    let c = a.c.or(emulated).unwrap_or(ModelParams::default().c);
    let v = validate_model(&baseline, &hybrid, c)?;
    if json {
        return print_json(&v);
    }
    println!("alpha {:.6}", v.alpha);
    println!("beta {:.6}", v.beta);
    println!("predicted {:.6}", v.predicted);
    println!("measured {:.6}", v.measured);
    println!("error {:+.2}%", 100.0 * v.error);
    if v.out_of_contract {
        println!("note: an accelerator was the slowest element, which the model does not cover");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use hgraph::runner::AlgorithmKind;

    #[test]
    fn configs_load_from_reports_or_bare_files() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig {
            subcommand: "run".into(),
            graph: GraphConfig {
                source: "rmat:8:4:1".parse().unwrap(),
                undirected: false,
                weighted: false,
                symmetrize: false,
                synth_weights: false,
            },
            algorithm: AlgorithmKind::Bfs,
            strategy: Strategy::High,
            alpha: 0.7,
            elements: parse_elements("host:2,accel:1@throttle=4e9").unwrap(),
            direction: None,
            seeds: Seeds::from_master(3),
            run: RunSpec::default(),
            outputs: Outputs::default(),
        };
        let bare = dir.path().join("cfg.json");
        fs::write(&bare, serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(load_config(&bare).unwrap(), cfg);

        let mut c = cfg.clone();
        let exec = execute(&mut c, false).unwrap();
        let report = dir.path().join("report.json");
        fs::write(&report, exec.report.to_json()).unwrap();
        assert_eq!(load_config(&report).unwrap(), c);
    }
}
