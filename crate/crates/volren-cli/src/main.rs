//! `volren`: render piecewise media and procedural scenes, validate the
//! renderer against Monte Carlo simulation, and measure quadrature
//! convergence.
//!
//! Exit codes: 0 success, 1 validation/statistical failure, 2 usage or
//! parse error.

mod camera;
mod format;
mod ppm;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use format::{fmt_sig, parse_counts, parse_params, parse_resolution, parse_rgb, parse_unit_rgb};
use volren::render::Alpha;
use volren::{
    build_scene, convergence_table, mc_estimate, render_alpha, render_piecewise,
    write_convergence_csv, PiecewiseMedium, RenderOutput, Rgb, Scene,
};

#[derive(Parser)]
#[command(name = "volren", version, about = "Emission-absorption volume rendering toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Form {
    /// Composite from densities and segment lengths.
    Density,
    /// Composite from per-segment alphas.
    Alpha,
}

#[derive(Subcommand)]
enum Command {
    /// Composite a medium CSV and print color, weights and residual.
    RenderRay {
        /// Medium CSV file (header t0,t1,sigma,r,g,b).
        #[arg(long)]
        medium: PathBuf,
        /// Background color R,G,B composited behind the medium.
        #[arg(long)]
        background: Option<String>,
        /// Which algebraic form of the compositor to run.
        #[arg(long, value_enum, default_value_t = Form::Density)]
        form: Form,
    },
    /// Render an orthographic image of a procedural scene to a PPM file.
    RenderImage {
        /// Scene name: constant | step | blob | blobs.
        #[arg(long)]
        scene: String,
        /// Scene parameters as key=value pairs, e.g. sigma0=5,radius=0.2.
        #[arg(long)]
        params: Option<String>,
        /// Resolution WxH.
        #[arg(long)]
        res: String,
        /// Segments per ray.
        #[arg(long)]
        samples: usize,
        /// Jitter the per-segment sample points instead of using midpoints.
        #[arg(long)]
        stratified: bool,
        /// Seed for stratified placement.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output PPM path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo validation of the deterministic renderer.
    Validate {
        /// Medium CSV file.
        #[arg(long)]
        medium: PathBuf,
        /// Number of termination samples.
        #[arg(long)]
        samples: u64,
        /// RNG seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Expected color R,G,B overriding the renderer (self-test hook).
        #[arg(long)]
        expect: Option<String>,
    },
    /// Error-vs-reference sweep over segment counts, written as CSV.
    Convergence {
        /// Scene name: constant | step | blob | blobs.
        #[arg(long)]
        scene: String,
        /// Scene parameters as key=value pairs.
        #[arg(long)]
        params: Option<String>,
        /// Comma-separated segment counts, e.g. 8,16,32,64.
        #[arg(long)]
        ns: String,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
}

/// Anything that should terminate with exit code 2.
struct UsageError(String);

impl From<volren::Error> for UsageError {
    fn from(e: volren::Error) -> Self {
        UsageError(e.to_string())
    }
}

impl From<String> for UsageError {
    fn from(message: String) -> Self {
        UsageError(message)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, UsageError> {
    match command {
        Command::RenderRay { medium, background, form } => {
            let medium = load_medium(&medium)?;
            let background = background.as_deref().map(parse_unit_rgb).transpose()?;
            let output = composite(&medium, background, form)?;
            print_render_output(&output);
            Ok(ExitCode::SUCCESS)
        }
        Command::RenderImage { scene, params, res, samples, stratified, seed, out } => {
            let scene = load_scene(&scene, params.as_deref())?;
            let (width, height) = parse_resolution(&res)?;
            if samples == 0 {
                return Err("`--samples` must be at least 1".to_string().into());
            }
            let jitter = stratified.then_some(seed);
            let pixels = camera::render_image(&scene, width, height, samples, jitter)?;
            std::fs::write(&out, ppm::encode(width, height, &pixels))
                .map_err(|e| format!("cannot write '{}': {e}", out.display()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { medium, samples, seed, expect } => {
            let medium = load_medium(&medium)?;
            let expected = match expect.as_deref() {
                Some(text) => parse_rgb(text)?,
                None => render_piecewise(&medium, None).color,
            };
            let stats = mc_estimate(&medium, None, samples, seed)?;
            let z = z_scores(stats.mean, expected, stats.standard_error);
            print_csv_rgb("mean", stats.mean);
            print_csv_rgb("expected", expected);
            print_csv_rgb("stderr", stats.standard_error);
            println!("z,{},{},{}", fmt_sig(z[0]), fmt_sig(z[1]), fmt_sig(z[2]));
            println!("escape_fraction,{}", fmt_sig(stats.escape_fraction));
            let pass = z.iter().all(|v| v.abs() <= 4.0);
            println!("result,{}", if pass { "pass" } else { "fail" });
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Convergence { scene, params, ns, out } => {
            let scene = load_scene(&scene, params.as_deref())?;
            let counts = parse_counts(&ns)?;
            let rows = convergence_table(&scene, &camera::center_ray(), &counts)?;
            let mut buf = Vec::new();
            write_convergence_csv(&rows, &mut buf)
                .expect("writing convergence rows to memory cannot fail");
            std::fs::write(&out, buf)
                .map_err(|e| format!("cannot write '{}': {e}", out.display()))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_medium(path: &Path) -> Result<PiecewiseMedium, UsageError> {
    PiecewiseMedium::read_csv_file(path)
        .map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_scene(name: &str, params: Option<&str>) -> Result<Scene, UsageError> {
    let params = parse_params(params)?;
    Ok(build_scene(name, &params)?)
}

fn composite(
    medium: &PiecewiseMedium,
    background: Option<Rgb>,
    form: Form,
) -> Result<RenderOutput, UsageError> {
    match form {
        Form::Density => Ok(render_piecewise(medium, background)),
        Form::Alpha => {
            let alphas: Vec<Alpha> = medium
                .sigmas()
                .iter()
                .zip(medium.deltas())
                .map(|(&sigma, &delta)| Alpha::from_sigma_delta(sigma, delta))
                .collect();
            Ok(render_alpha(&alphas, medium.colors(), background)?)
        }
    }
}

fn print_render_output(output: &RenderOutput) {
    print_csv_rgb("color", output.color);
    for (n, weight) in output.weights.iter().enumerate() {
        println!("weight,{},{}", n + 1, fmt_sig(*weight));
    }
    println!("residual,{}", fmt_sig(output.residual_transmittance));
}

fn print_csv_rgb(label: &str, value: Rgb) {
    println!("{label},{},{},{}", fmt_sig(value.r), fmt_sig(value.g), fmt_sig(value.b));
}

fn z_scores(mean: Rgb, expected: Rgb, stderr: Rgb) -> [f64; 3] {
    let mut z = [0.0f64; 3];
    for (ch, out) in z.iter_mut().enumerate() {
        let diff = mean.channels()[ch] - expected.channels()[ch];
        let se = stderr.channels()[ch];
        *out = if se == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY * diff.signum()
            }
        } else {
            diff / se
        };
    }
    z
}
