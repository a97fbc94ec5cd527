//! Command-line front end. Every subcommand loads a scene, runs one library operation and
//! writes its outputs to `--out`; the front end itself is single-threaded orchestration.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::error::Result;
use crate::io::{self, Report};
use crate::iteration::{julia_backward_cloud, julia_box_cover, kernel_witness, DEFAULT_BURN_IN};
use crate::markov::{minimal_sets, t_infinity_exact, t_raster, Node, Raster};
use crate::scene::Scene;
use crate::spatial::median_nn_distance;
use crate::staircase::staircase_table;
use crate::system::RandomModel;
use crate::thermo::{self, BowenOptions, HoelderReport, Metric, TransferOperator};
use crate::verify::{self, CheckOutcome};

#[derive(Debug, Parser)]
#[command(
    name = "randdyn",
    version,
    about = "Random polynomial dynamics: Julia sets, escape probabilities, singular functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Point cloud of the Julia set by inverse iteration (CSV and density graymap).
    Julia(Common),
    /// Raster of the escape probability T (16-bit graymap and CSV).
    Coliseum(Common),
    /// Escape probability of a one-dimensional model on a grid over [0, 1] (CSV).
    Staircase(Common),
    /// Minimal sets of the random system and their periods.
    Minimal(Common),
    /// Hoelder exponents of the escape probability.
    Hoelder(Common),
    /// Hausdorff dimension from the Bowen equation, with a box-counting cross-check.
    Dimension(Common),
    /// Runs the property battery; exits non-zero if any check fails.
    Verify(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Scene file, or the name of a shipped scene (circle, chebyshev, dc1, two-attractors,
    /// disjoint-k, cantor, bernoulli-a).
    pub scene: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Recursion depth (overrides the scene).
    #[arg(long)]
    pub depth: Option<usize>,
    /// Pixels per side, or grid points for staircases (overrides the scene).
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Output directory (overrides the scene; default `out`).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Runs one subcommand inside a thread pool of the requested size.
pub fn run(command: &Command) -> Result<ExitCode> {
    let common = match command {
        Command::Julia(c)
        | Command::Coliseum(c)
        | Command::Staircase(c)
        | Command::Minimal(c)
        | Command::Hoelder(c)
        | Command::Dimension(c)
        | Command::Verify(c) => c,
    };
    let scene = Scene::resolve(&common.scene)?;
    let ctx = Context::new(scene, common)?;
    crate::par::with_threads(common.threads, || match command {
        Command::Julia(_) => ctx.julia(),
        Command::Coliseum(_) => ctx.coliseum(),
        Command::Staircase(_) => ctx.staircase(),
        Command::Minimal(_) => ctx.minimal(),
        Command::Hoelder(_) => ctx.hoelder(),
        Command::Dimension(_) => ctx.dimension(),
        Command::Verify(_) => ctx.verify(),
    })
}

struct Context {
    scene: Scene,
    seed: u64,
    depth: usize,
    resolution: (usize, usize),
    out: PathBuf,
}

impl Context {
    fn new(scene: Scene, c: &Common) -> Result<Self> {
        let depth = c.depth.unwrap_or_else(|| scene.depth());
        let resolution = c.resolution.map_or_else(|| scene.resolution(), |n| (n, n));
        let out = c.out.clone().or_else(|| scene.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
        fs::create_dir_all(&out)?;
        Ok(Self { scene, seed: c.seed, depth, resolution, out })
    }

    fn path(&self, suffix: &str) -> PathBuf {
        self.out.join(format!("{}-{suffix}", self.scene.name))
    }

    fn create(&self, suffix: &str) -> Result<BufWriter<File>> {
        Ok(BufWriter::new(File::create(self.path(suffix))?))
    }

    fn model(&self) -> Result<RandomModel> {
        self.scene.model()
    }

    fn finish(&self, report: &Report, suffix: &str) -> Result<()> {
        report.write_to(self.create(suffix)?)?;
        print!("{report}");
        Ok(())
    }

    fn raster(&self, model: &RandomModel) -> Result<Raster> {
        let params = self.scene.params_with_depth(model, self.depth)?;
        let (nx, ny) = self.resolution;
        t_raster(model, &params, self.scene.bbox()?, nx, ny, self.depth)
    }

    fn julia(&self) -> Result<ExitCode> {
        let model = self.model()?;
        let cloud = julia_backward_cloud(model.system(), self.scene.cloud_points(), DEFAULT_BURN_IN, self.seed)?;
        io::write_cloud_csv(self.create("julia.csv")?, &cloud)?;
        let (nx, ny) = self.resolution;
        let gray = io::cloud_graymap(&cloud, self.scene.bbox()?, nx, ny);
        io::write_pgm16(self.create("julia.pgm")?, nx, ny, &gray)?;
        let radii: Vec<f64> = cloud.points.iter().map(|z| z.norm()).collect();
        let mut report = Report::new();
        report
            .push("scene", &self.scene.name)
            .push("points", cloud.len())
            .push("seed", self.seed)
            .push("min_modulus", io::fmt_f64(radii.iter().copied().fold(f64::INFINITY, f64::min)))
            .push("max_modulus", io::fmt_f64(radii.iter().copied().fold(0.0, f64::max)))
            .push("median_nn_distance", io::fmt_f64(median_nn_distance(&cloud.points)));
        self.finish(&report, "julia.txt")?;
        Ok(ExitCode::SUCCESS)
    }

    fn coliseum(&self) -> Result<ExitCode> {
        let model = self.model()?;
        let raster = self.raster(&model)?;
        io::write_raster_pgm(&self.path("coliseum.pgm"), &raster)?;
        io::write_raster_csv(self.create("coliseum.csv")?, &raster)?;
        let mut report = Report::new();
        report
            .push("scene", &self.scene.name)
            .push("resolution", format!("{}x{}", raster.nx, raster.ny))
            .push("depth", self.depth)
            .push("max_width", io::fmt_f64(raster.max_width()));
        self.finish(&report, "coliseum.txt")?;
        Ok(ExitCode::SUCCESS)
    }

    fn staircase(&self) -> Result<ExitCode> {
        let model = self.scene.staircase_model()?;
        let n = self.resolution.0;
        let table = staircase_table(model, n, self.depth);
        io::write_staircase_csv(self.create("staircase.csv")?, &table)?;
        let mut report = Report::new();
        report
            .push("scene", &self.scene.name)
            .push("points", table.len())
            .push("depth", self.depth)
            .push("max_width", io::fmt_f64(table.iter().map(|(_, v)| v.width()).fold(0.0, f64::max)));
        self.finish(&report, "staircase.txt")?;
        Ok(ExitCode::SUCCESS)
    }

    fn minimal(&self) -> Result<ExitCode> {
        let model = self.model()?;
        let params = self.scene.params_with_depth(&model, self.depth)?;
        let seeds = self.scene.seed_points()?;
        let report_data = minimal_sets(&model, &params, &seeds, 500, 200, self.seed)?;
        let mut report = Report::new();
        report
            .push("scene", &self.scene.name)
            .push("minimal_sets", report_data.minimal_sets.len())
            .push("includes_infinity", report_data.includes_infinity)
            .push("period_sum", report_data.period_sum().map_or("unknown".into(), |s| s.to_string()))
            .push("cluster_threshold", io::fmt_f64(report_data.threshold))
            .push("ambiguous", report_data.ambiguous)
            .push("slow_convergence", report_data.slow_convergence);
        for (k, set) in report_data.minimal_sets.iter().enumerate() {
            let nodes: Vec<String> = set
                .nodes
                .iter()
                .map(|n| match n {
                    Node::Infinity => "inf".to_string(),
                    Node::Cluster(c) => {
                        let cl = &report_data.clusters[*c];
                        format!("({:.6}{:+.6}i, diam {:.2e})", cl.centroid.re, cl.centroid.im, cl.diameter)
                    }
                    Node::Unknown => "?".to_string(),
                })
                .collect();
            report.push(format!("set_{}", k + 1), nodes.join(" "));
            report.push(format!("period_{}", k + 1), set.period.map_or("unknown".into(), |p| p.to_string()));
        }
        self.finish(&report, "minimal.txt")?;
        Ok(ExitCode::SUCCESS)
    }

    fn hoelder(&self) -> Result<ExitCode> {
        let model = self.model()?;
        let params = self.scene.params_with_depth(&model, self.depth)?;
        let omega = thermo::omega_integral(&model, 1000, 200, self.seed)?;
        let u_entropy = thermo::hoelder_entropy(&model, omega.0)?;
        let conditions = thermo::nondiff_conditions(&model, &params, 256, 40, self.seed)?;
        let u_hausdorff = (|| -> Result<f64> {
            let cloud = julia_backward_cloud(model.system(), self.scene.cloud_points(), DEFAULT_BURN_IN, self.seed)?;
            let op = TransferOperator::new(model.system(), &cloud, Metric::Spherical, None)?;
            let delta = thermo::bowen_dimension(&op, &BowenOptions::default())?.delta;
            Ok(thermo::hoelder_hausdorff(&model, &cloud, &op, delta, 2000)?.u)
        })();
        let hoelder = HoelderReport::new(u_entropy, u_hausdorff.as_ref().ok().copied(), omega, conditions);
        let mut report = Report::new();
        report
            .push("scene", &self.scene.name)
            .push("u_entropy", io::fmt_f64(hoelder.u_entropy))
            .push(
                "u_hausdorff",
                match &u_hausdorff {
                    Ok(u) => io::fmt_f64(*u),
                    Err(e) => format!("unavailable ({e})"),
                },
            )
            .push("omega_integral", io::fmt_f64(omega.0))
            .push("omega_integral_stderr", io::fmt_f64(omega.1))
            .push("condition_entropy", conditions.entropy_exceeds)
            .push("condition_postcritical_bounded", conditions.postcritical_bounded)
            .push("condition_two_generators", conditions.two_generators)
            .push("verdict", format!("{:?}", hoelder.verdict));
        io::write_columns(
            self.create("hoelder.csv")?,
            &["u_entropy", "u_hausdorff", "omega_integral", "omega_integral_stderr"],
            [vec![hoelder.u_entropy, hoelder.u_hausdorff.unwrap_or(f64::NAN), omega.0, omega.1]],
        )?;
        self.finish(&report, "hoelder.txt")?;
        Ok(ExitCode::SUCCESS)
    }

    fn dimension(&self) -> Result<ExitCode> {
        let model = self.model()?;
        let sys = model.system();
        let cloud = julia_backward_cloud(sys, self.scene.cloud_points(), DEFAULT_BURN_IN, self.seed)?;
        let op = TransferOperator::new(sys, &cloud, Metric::Spherical, None)?;
        let bowen = thermo::bowen_dimension(&op, &BowenOptions::default())?;
        io::write_columns(
            self.create("dimension.csv")?,
            &["t", "log_rho"],
            bowen.trace.iter().map(|&(t, r)| vec![t, r]),
        )?;
        let mut report = Report::new();
        report.push("scene", &self.scene.name).push("delta", io::fmt_f64(bowen.delta));
        let b = self.scene.bbox()?;
        let eps = (b.xmax - b.xmin).max(b.ymax - b.ymin) / 1000.0;
        match julia_box_cover(sys, eps, 3_000_000)
            .and_then(|c| thermo::box_counting_dim(&c, &thermo::geometric_scales(25.0 * eps, 4.0 * eps, 6)))
        {
            Ok(bc) => report.push("box_counting", io::fmt_f64(bc.dimension)),
            Err(e) => report.push("box_counting", format!("unavailable ({e})")),
        };
        self.finish(&report, "dimension.txt")?;
        Ok(ExitCode::SUCCESS)
    }

    fn verify(&self) -> Result<ExitCode> {
        let outcomes = if self.scene.is_staircase() { self.staircase_battery()? } else { self.battery()? };
        let mut report = Report::new();
        report.push("scene", &self.scene.name);
        for o in &outcomes {
            report.push(o.name.clone(), o.to_string().split_once(": ").map_or(String::new(), |(_, r)| r.to_string()));
        }
        let failed = outcomes.iter().filter(|o| !o.pass).count();
        report.push("failed", failed);
        self.finish(&report, "verify.txt")?;
        Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
    }

    fn battery(&self) -> Result<Vec<CheckOutcome>> {
        let model = self.model()?;
        let sys = model.system();
        let params = self.scene.params_with_depth(&model, self.depth)?;
        let mut out = Vec::new();

        let raster = self.raster(&model)?;
        let fp = verify::check_fixed_point(&raster, &model, &params);
        out.push(fp.outcome());
        out.push(skip_on_error(
            "level order 0.25 < 0.75",
            verify::check_level_order(&raster, 0.25, 0.75, 0.02).map(|r| r.outcome()),
        ));
        let range = verify::check_range_full(&raster, 0.02);
        let mut range_outcome = range.outcome();
        if raster.cells.iter().all(|c| c.lo == 1.0) {
            range_outcome.detail.push_str("; T = 1 everywhere, so the smallest filled Julia set is empty");
        }
        out.push(range_outcome);

        let b = self.scene.bbox()?;
        let eps = (b.xmax - b.xmin).max(b.ymax - b.ymin) / 1000.0;
        let cover = julia_box_cover(sys, eps, 2_000_000)?;
        let tol = 3.0 * median_nn_distance(&cover.points);
        out.push(verify::check_backward_self_similarity(sys, &cover, tol)?.outcome());

        let cloud = julia_backward_cloud(sys, self.scene.cloud_points().min(100_000), DEFAULT_BURN_IN, self.seed)?;
        if sys.len() >= 2 {
            out.push(verify::check_disjoint_preimages(sys, &cloud)?.outcome());
            let witness_params = crate::iteration::EscapeParams { max_depth: 12, ..params.clone() };
            let stride = (cloud.len() / 100).max(1);
            let probes: Vec<Complex64> = cloud.points.iter().step_by(stride).take(100).copied().collect();
            let found = crate::par::map_slice(&probes, |z| kernel_witness(*z, sys, &witness_params).is_some());
            let n_found = found.iter().filter(|&&f| f).count();
            out.push(CheckOutcome {
                name: "kernel witnesses".into(),
                pass: n_found == probes.len(),
                measured: n_found as f64,
                threshold: probes.len() as f64,
                detail: "cloud points with a word of length <= 12 leaving J".into(),
            });
        }
        if let Some(region) = self.scene.open_set_region() {
            out.push(verify::check_open_set_condition(sys, &region, 10_000, self.seed)?.outcome());
        }
        let eval = |z| t_infinity_exact(z, &model, &params, 12.min(self.depth));
        out.push(verify::check_global_hoelder(&model, eval, &cloud, 500, self.seed)?.outcome());
        Ok(out)
    }

    fn staircase_battery(&self) -> Result<Vec<CheckOutcome>> {
        let model = self.scene.staircase_model()?;
        let table = staircase_table(model, self.resolution.0, self.depth);
        let max_width = table.iter().map(|(_, v)| v.width()).fold(0.0, f64::max);
        let monotone = table.windows(2).all(|w| w[0].1.lo <= w[1].1.hi);
        let mut worst: f64 = 0.0;
        for (k, (x, _)) in table.iter().enumerate() {
            let mc = crate::staircase::staircase_mc(*x, model, 10_000, 200, self.seed.wrapping_add(k as u64));
            let exact = model.value(*x, self.depth);
            let excess = (mc.estimate - exact.mid()).abs() - (4.0 * mc.stderr + 0.5 * exact.width() + 1e-12);
            worst = worst.max(excess);
        }
        Ok(vec![
            CheckOutcome {
                name: "monotone".into(),
                pass: monotone,
                measured: monotone as u8 as f64,
                threshold: 1.0,
                detail: format!("{} grid points", table.len()),
            },
            CheckOutcome {
                name: "resolution".into(),
                pass: max_width <= 1e-6,
                measured: max_width,
                threshold: 1e-6,
                detail: "largest interval width".into(),
            },
            CheckOutcome {
                name: "Monte Carlo agreement".into(),
                pass: worst <= 0.0,
                measured: worst,
                threshold: 0.0,
                detail: "excess over 4 standard errors plus half width".into(),
            },
        ])
    }
}

fn skip_on_error(name: &str, r: Result<CheckOutcome>) -> CheckOutcome {
    r.unwrap_or_else(|e| CheckOutcome {
        name: name.into(),
        pass: false,
        measured: f64::NAN,
        threshold: 0.0,
        detail: e.to_string(),
    })
}
