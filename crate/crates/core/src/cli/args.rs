use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith::parse_rational;

/// Exact-arithmetic toolkit for approximate lattices: model sets, covering
/// certificates, quasimorphisms and the twisted Euler extension.
#[derive(Debug, Parser, Serialize)]
#[command(
    name = "quasilattice",
    version,
    after_help = "Flags can also be read from a TOML file with `--config FILE`: one key per flag, plus `command` naming the subcommand.\nThe default output directory is taken from $QUASILATTICE_OUT_DIR."
)]
pub struct Cli {
    /// Directory for output files (default: $QUASILATTICE_OUT_DIR or `.`).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Generate a cut-and-project model set.
    Modelset(ModelsetArgs),
    /// Check certificates on point sets.
    Verify(VerifyArgs),
    /// Quasimorphism reports.
    #[command(subcommand)]
    Quasi(QuasiCommand),
    /// Euler cocycle and twisted extension reports.
    Euler(EulerArgs),
    /// Greedy maximal X-free subset of Y.
    Freeset(FreesetArgs),
}

/// A rational in exact syntax, kept as text so the report can echo it.
pub(crate) fn exact(s: &str) -> Result<String, String> {
    parse_rational(s).map(|_| s.trim().to_string()).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    /// ℤ[φ] with the Galois star map.
    Fibonacci,
    /// Ring of integers of ℚ(√d) (needs --d).
    Quadratic,
    /// ℤ[1/p] in ℝ with a p-adic ball window (needs --p, --window-exp).
    Zp,
    /// ℤ[1/p] in ℚ_p with window [−1, 1] and gauge cap pⁿ (needs --p, --n).
    ApproxRing,
    /// SL₂ over ℤ[√d]-type rings with conjugate near I (needs --d, --eps, --height).
    Pisot,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SchemeArgs {
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeKind>,
    #[arg(long)]
    pub d: Option<i64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    pub n: Option<i64>,
    /// Real window radius.
    #[arg(long, value_parser = exact)]
    pub window: Option<String>,
    /// p-adic window radius exponent.
    #[arg(long, allow_negative_numbers = true)]
    pub window_exp: Option<i64>,
    /// Matrix window radius for the pisot scheme.
    #[arg(long, value_parser = exact)]
    pub eps: Option<String>,
    /// Physical gauge bound.
    #[arg(long, value_parser = exact)]
    pub range: Option<String>,
    /// Entry-height bound for the pisot scheme.
    #[arg(long)]
    pub height: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct ModelsetArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Base name of the output files.
    #[arg(long, default_value = "modelset")]
    pub name: String,
    /// Also write an SVG (1D schemes only).
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// X·X on the interior covered by translates of X.
    ApproxSubgroup,
    Symmetry,
    /// --other covered by translates of --set.
    Cover,
    Commensurable,
    Delone,
    /// --set as a subset of the scheme's model set.
    Meyer,
    /// X·X⁻¹ inside the pullback of W·W⁻¹, for the scheme's window.
    Pullback,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub check: Check,
    /// Point-set file (one element per line, `# ambient:` header).
    #[arg(long)]
    pub set: Option<PathBuf>,
    #[arg(long)]
    pub other: Option<PathBuf>,
    /// Use the integer truncation ℤ ∩ [−N, N] as --set.
    #[arg(long)]
    pub int_range: Option<u64>,
    /// Covered region; defaults to the set's own region.
    #[arg(long, value_parser = exact)]
    pub region: Option<String>,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value = "verify")]
    pub name: String,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QuasiCommand {
    /// Brooks counting quasimorphism for a word w.
    Brooks(BrooksArgs),
    /// Nearest-integer retraction on sampled rational pairs.
    Nearint(NearintArgs),
    /// Homogenization estimates q(gᴺ)/N.
    Homogenize(HomogenizeArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct BrooksArgs {
    #[arg(long, default_value = "xy")]
    pub w: String,
    /// Radius of the word ball.
    #[arg(long, default_value_t = 4)]
    pub ball: usize,
    /// Bound for the approximate kernel; omitted means no kernel.
    #[arg(long, value_parser = exact)]
    pub kernel: Option<String>,
    /// Largest |n| for the xⁿy order witness table.
    #[arg(long, default_value_t = 20)]
    pub witness: i64,
    #[arg(long, default_value = "quasi-brooks")]
    pub name: String,
}

#[derive(Debug, Args, Serialize)]
pub struct NearintArgs {
    #[arg(long, value_parser = exact, default_value = "1/2")]
    pub gamma: String,
    #[arg(long, default_value_t = 100_000)]
    pub pairs: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "quasi-nearint")]
    pub name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QmKind {
    Brooks,
    ExponentSumX,
    ExponentSumY,
}

#[derive(Debug, Args, Serialize)]
pub struct HomogenizeArgs {
    #[arg(long, value_enum, default_value = "brooks")]
    pub q: QmKind,
    /// Counted word for the Brooks quasimorphism.
    #[arg(long, default_value = "xy")]
    pub w: String,
    /// Element to homogenize at.
    #[arg(long)]
    pub g: String,
    #[arg(long, default_value_t = 8)]
    pub n: u64,
    #[arg(long, default_value = "quasi-homogenize")]
    pub name: String,
}

#[derive(Debug, Args, Serialize)]
pub struct EulerArgs {
    /// Random triples for the cocycle identity.
    #[arg(long, default_value_t = 10_000)]
    pub triples: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    /// Word-length radius for the defect scan; 0 skips it.
    #[arg(long, default_value_t = 0)]
    pub ball: usize,
    /// Associativity triples sampled from the ball.
    #[arg(long, default_value_t = 1000)]
    pub assoc: usize,
    /// Also certify the symmetric part of Δ on the ball.
    #[arg(long)]
    pub kernel: bool,
    #[arg(long, default_value = "euler")]
    pub name: String,
}

#[derive(Debug, Args, Serialize)]
pub struct FreesetArgs {
    /// Point-set file for Y.
    #[arg(long)]
    pub y: Option<PathBuf>,
    /// Point-set file for X.
    #[arg(long)]
    pub x: Option<PathBuf>,
    /// Y as an integer interval `lo:hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub y_int: Option<String>,
    /// X as comma-separated integers.
    #[arg(long, allow_hyphen_values = true)]
    pub x_int: Option<String>,
    #[arg(long, default_value = "freeset")]
    pub name: String,
}
