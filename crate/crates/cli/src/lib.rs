//! Command-line front end. [`run`] takes explicit streams so sessions can
//! be scripted in tests.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nimlab::closed_form::{construct_move_appendix, g_closed, moore_sum, nim_sum};
use nimlab::game::{is_legal_move, is_p_position_exco, move_violation, p_move};
use nimlab::lab::{
    check_conjecture, sg_bounded, verify_shift_lemma, ConjectureId, ConjectureReport, SgAnswer, Span, Status,
    SweepRanges,
};
use nimlab::sg::{
    best_move, load_cache_expecting, load_cache_file, save_cache_file, sg_bruteforce, sg_table_n2_with_limit,
    verify_sg_axioms, Memo, SgTable, DEFAULT_CELL_LIMIT, DEFAULT_VISIT_LIMIT,
};
use nimlab::{Error as CoreError, GameRules, Position};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::json;

pub const EXIT_OK: i32 = 0;
/// Refuted conjecture, violated check, or a P-position with no winning move.
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "nimlab", version, about = "Sprague-Grundy values and strategies for Nim, Moore's Nim, Co-Nim and Exco-Nim")]
struct Cli {
    /// Default for any flag, as KEY=VALUE (repeatable); explicit flags win.
    #[arg(long = "config", global = true, value_name = "KEY=VALUE")]
    config: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the SG value of a position.
    Sg(QueryArgs),
    /// Print a winning move, if there is one.
    Move(QueryArgs),
    /// Run an exhaustive check over a box.
    Verify(VerifyArgs),
    /// Sweep a two-pile Exco-Nim conjecture and emit a report.
    Conjecture(ConjectureArgs),
    /// Emit one two-pile row as CSV: x2, G, u, u - G.
    Table(TableArgs),
    /// Play against the engine on stdin/stdout.
    Play(PlayArgs),
    /// Build or check an on-disk table.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Args, Debug, Clone, Default)]
struct GameArgs {
    /// nim, moore, conim or exco.
    #[arg(long)]
    game: Option<String>,
    /// Number of main piles; inferred from --pos when omitted.
    #[arg(long)]
    n: Option<usize>,
    /// Moore's Nim: most piles one move may reduce.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// On-disk two-pile table to read (and refresh when too small).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Cap on table cells or search visits.
    #[arg(long)]
    limit: Option<u64>,
}

#[derive(Args, Debug)]
struct QueryArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Exco: x0,x1,...,xn. Other games: x1,...,xn.
    #[arg(long)]
    pos: Option<String>,
    /// Only resolve values up to this bound; larger ones print as "> v".
    #[arg(long)]
    max: Option<u64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Theorem1,
    Ppos,
    Moore,
    Axioms,
    Shift,
    Appendix,
    Prop4,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    check: Check,
    #[command(flatten)]
    game: GameArgs,
    /// Upper bound for every coordinate of the box.
    #[arg(long)]
    max: Option<u64>,
    /// Two-pile box as x0,x1,x2 (shift, prop4).
    #[arg(long = "box")]
    bounds: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Conj {
    C1,
    C2,
    C3,
    C4,
    C5,
    P4,
}

impl Conj {
    fn id(self) -> ConjectureId {
        match self {
            Conj::C1 => ConjectureId::C1,
            Conj::C2 => ConjectureId::C2,
            Conj::C3 => ConjectureId::C3,
            Conj::C4 => ConjectureId::C4,
            Conj::C5 => ConjectureId::C5,
            Conj::P4 => ConjectureId::P4,
        }
    }
}

#[derive(Args, Debug)]
struct ConjectureArgs {
    #[arg(value_enum)]
    which: Conj,
    /// Range a..b or a single value.
    #[arg(long)]
    x0: Option<String>,
    #[arg(long, conflicts_with = "x1_pow2")]
    x1: Option<String>,
    /// Exponent range a..b: x1 runs over 2^a, ..., 2^b.
    #[arg(long = "x1-pow2")]
    x1_pow2: Option<String>,
    #[arg(long = "x2-max")]
    x2_max: Option<u64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long)]
    x0: Option<u64>,
    #[arg(long)]
    x1: Option<u64>,
    /// Range a..b or a single value.
    #[arg(long)]
    x2: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct PlayArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long)]
    pos: Option<String>,
    /// Let the human move first.
    #[arg(long)]
    human_first: bool,
    /// Shuffle ties in the losing-side fallback move.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    /// Compute a table and write it.
    Build {
        #[command(flatten)]
        game: GameArgs,
        /// Box as x0,x1,...,xn (x0 = 0 outside Exco-Nim).
        #[arg(long = "box")]
        bounds: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Load a table and re-check every stored value.
    Check { path: PathBuf },
}

const CONFIG_KEYS: &[&str] =
    &["game", "n", "k", "pos", "max", "box", "format", "cache", "limit", "seed", "x0", "x1", "x2", "x2-max"];

/// `--config` defaults, looked up only when the matching flag is absent.
#[derive(Debug, Default)]
struct Config(BTreeMap<String, String>);

impl Config {
    fn parse(entries: &[String]) -> anyhow::Result<Config> {
        let mut map = BTreeMap::new();
        for e in entries {
            let (k, v) = e.split_once('=').ok_or_else(|| usage(format!("--config expects KEY=VALUE, got {e:?}")))?;
            let k = k.trim();
            if !CONFIG_KEYS.contains(&k) {
                return Err(usage(format!("unknown config key {k:?}")));
            }
            map.insert(k.to_string(), v.trim().to_string());
        }
        Ok(Config(map))
    }

    fn or<T: FromStr>(&self, flag: Option<T>, key: &str) -> anyhow::Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|_| usage(format!("config {key}={raw:?} is not valid"))),
        }
    }

    fn format(&self, flag: Option<Format>, default: Format) -> anyhow::Result<Format> {
        if let Some(f) = flag {
            return Ok(f);
        }
        match self.0.get("format") {
            None => Ok(default),
            Some(raw) => Format::from_str(raw, true).map_err(|_| usage(format!("config format={raw:?} is not valid"))),
        }
    }
}

/// Marks an error as a usage error (exit 2).
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Usage(msg.into()))
}

fn exit_code_for(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(CoreError::ResourceLimit { .. }) = cause.downcast_ref::<CoreError>() {
            return EXIT_LIMIT;
        }
    }
    EXIT_USAGE
}

/// Parses `args` (including the program name) and runs one command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    let result = Config::parse(&cli.config).and_then(|cfg| dispatch(cli.command, &cfg, input, out));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code_for(&e)
        }
    }
}

fn dispatch(cmd: Command, cfg: &Config, input: &mut dyn BufRead, out: &mut dyn Write) -> anyhow::Result<i32> {
    match cmd {
        Command::Sg(a) => cmd_sg(a, cfg, out),
        Command::Move(a) => cmd_move(a, cfg, out),
        Command::Verify(a) => cmd_verify(a, cfg, out),
        Command::Conjecture(a) => cmd_conjecture(a, cfg, out),
        Command::Table(a) => cmd_table(a, cfg, out),
        Command::Play(a) => cmd_play(a, cfg, input, out),
        Command::Cache { action } => cmd_cache(action, cfg, out),
    }
}

// ---- shared parsing ----

fn parse_list(text: &str, what: &str) -> anyhow::Result<Vec<u64>> {
    text.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| usage(format!("{what}: {t:?} is not a nonnegative integer"))))
        .collect()
}

/// `a..b` (inclusive) or a single value.
fn parse_span(text: &str, what: &str) -> anyhow::Result<Span> {
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| usage(format!("{what}: {s:?} is not a nonnegative integer")));
    match text.split_once("..") {
        Some((a, b)) => Ok(Span::new(num(a)?, num(b.trim_start_matches('='))?)),
        None => Ok(Span::single(num(text)?)),
    }
}

fn resolve_game(g: &GameArgs, cfg: &Config, pos_len: Option<usize>, default_n: usize) -> anyhow::Result<GameRules> {
    let token = cfg.or(g.game.clone(), "game")?.unwrap_or_else(|| "exco".into());
    let n_flag = cfg.or(g.n, "n")?;
    let k = cfg.or(g.k, "k")?;
    let extra = token == "exco";
    let inferred = pos_len.map(|len| if extra { len.saturating_sub(1) } else { len });
    let n = match (n_flag, inferred) {
        (Some(n), Some(m)) if n != m => {
            return Err(usage(format!("--n {n} does not match a position with {m} main piles")));
        }
        (Some(n), _) | (None, Some(n)) => n,
        (None, None) => default_n,
    };
    let full = match token.as_str() {
        "moore" => format!("moore:{}", k.ok_or_else(|| usage("moore needs --k"))?),
        "nim" | "conim" | "exco" => token.clone(),
        other => return Err(usage(format!("unknown game {other:?}; expected nim, moore, conim or exco"))),
    };
    GameRules::from_token(&full, n).map_err(|e| usage(e.to_string()))
}

fn parse_position(rules_hint: &GameArgs, cfg: &Config, text: Option<String>) -> anyhow::Result<(GameRules, Position)> {
    let text = cfg.or(text, "pos")?.ok_or_else(|| usage("--pos is required"))?;
    let values = parse_list(&text, "--pos")?;
    let rules = resolve_game(rules_hint, cfg, Some(values.len()), 2)?;
    let pos = if rules.has_extra_pile() {
        Position::from_coords(values).map_err(|e| usage(e.to_string()))?
    } else {
        Position::main_only(values)
    };
    rules.check_position(&pos).map_err(|e| usage(e.to_string()))?;
    Ok((rules, pos))
}

/// The command-line spelling: Exco positions with `x0`, others without.
fn show(rules: &GameRules, pos: &Position) -> String {
    if rules.has_extra_pile() {
        pos.to_string()
    } else {
        pos.piles().iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn reject_csv(f: Format, cmd: &str) -> anyhow::Result<()> {
    if f == Format::Csv {
        return Err(usage(format!("{cmd} has no csv output; use human or json")));
    }
    Ok(())
}

// ---- two-pile tables ----

/// A table covering `need`, read from `cache` when it is large enough and
/// otherwise computed (and written back to `cache`).
fn n2_table(need: [u64; 3], cache: Option<&Path>, limit: Option<u64>) -> anyhow::Result<SgTable> {
    let rules = GameRules::ExcoNim { n: 2 };
    if let Some(path) = cache {
        if path.exists() {
            let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
            let t = load_cache_expecting(std::io::BufReader::new(file), &rules)
                .with_context(|| format!("reading cache {}", path.display()))?;
            if t.covers(&need) {
                return Ok(t);
            }
        }
    }
    let t = sg_table_n2_with_limit(need[0], need[1], need[2], limit.unwrap_or(DEFAULT_CELL_LIMIT))?;
    if let Some(path) = cache {
        save_cache_file(&t, path).with_context(|| format!("writing cache {}", path.display()))?;
    }
    Ok(t)
}

/// Exact value through the cheapest available route.
fn exact_value(rules: &GameRules, pos: &Position, common: &Common, cfg: &Config) -> anyhow::Result<u64> {
    let limit = cfg.or(common.limit, "limit")?;
    Ok(match rules {
        GameRules::StandardNim { .. } => nim_sum(pos.piles().iter().copied()),
        GameRules::ExcoNim { n } if *n >= 3 => g_closed(pos)?,
        GameRules::ExcoNim { .. } => {
            let c = pos.canonical();
            let cache = cfg.or(common.cache.clone(), "cache")?;
            let t = n2_table([c.x0(), c.piles()[0], c.piles()[1]], cache.as_deref(), limit)?;
            t.lookup(&c)?
        }
        _ => {
            let mut memo = Memo::with_limit(*rules, limit.unwrap_or(DEFAULT_VISIT_LIMIT));
            sg_bruteforce(rules, pos, &mut memo)?
        }
    })
}

// ---- sg / move ----

fn cmd_sg(a: QueryArgs, cfg: &Config, out: &mut dyn Write) -> anyhow::Result<i32> {
    let (rules, pos) = parse_position(&a.game, cfg, a.pos)?;
    let format = cfg.format(a.common.format, Format::Human)?;
    reject_csv(format, "sg")?;
    let max = cfg.or(a.max, "max")?;
    let answer = match (max, rules) {
        (Some(v), GameRules::ExcoNim { n: 2 }) => sg_bounded(&pos, v)?,
        (Some(v), _) => {
            let g = exact_value(&rules, &pos, &a.common, cfg)?;
            if g <= v {
                SgAnswer::Exact(g)
            } else {
                SgAnswer::AtLeast(v + 1)
            }
        }
        (None, _) => SgAnswer::Exact(exact_value(&rules, &pos, &a.common, cfg)?),
    };
    match format {
        Format::Json => write_json(out, &json!({ "game": rules.to_string(), "pos": show(&rules, &pos), "answer": answer }))?,
        _ => match answer {
            SgAnswer::Exact(g) => writeln!(out, "{g}")?,
            SgAnswer::AtLeast(_) => writeln!(out, "> {}", max.expect("bounded answers need --max"))?,
        },
    }
    Ok(EXIT_OK)
}

/// A move to a P-position, or `None` if `pos` is one.
fn winning_move(rules: &GameRules, pos: &Position, limit: Option<u64>) -> anyhow::Result<Option<Position>> {
    if rules.has_extra_pile() {
        return Ok(p_move(pos).map(|m| m.to));
    }
    let mut memo = Memo::with_limit(*rules, limit.unwrap_or(DEFAULT_VISIT_LIMIT));
    Ok(best_move(rules, pos, &mut memo)?.map(|m| m.to))
}

fn cmd_move(a: QueryArgs, cfg: &Config, out: &mut dyn Write) -> anyhow::Result<i32> {
    let (rules, pos) = parse_position(&a.game, cfg, a.pos)?;
    let format = cfg.format(a.common.format, Format::Human)?;
    reject_csv(format, "move")?;
    let mv = winning_move(&rules, &pos, cfg.or(a.common.limit, "limit")?)?;
    match format {
        Format::Json => write_json(
            out,
            &json!({ "game": rules.to_string(), "from": show(&rules, &pos), "to": mv.as_ref().map(|q| show(&rules, q)) }),
        )?,
        _ => match &mv {
            Some(to) => writeln!(out, "{} -> {}", show(&rules, &pos), show(&rules, to))?,
            None => writeln!(out, "position is a P-position (no winning move)")?,
        },
    }
    Ok(if mv.is_some() { EXIT_OK } else { EXIT_NEGATIVE })
}

// ---- verify ----

#[derive(Serialize)]
struct CheckReport {
    check: String,
    game: String,
    #[serde(rename = "box")]
    bounds: Vec<u64>,
    checked: u64,
    violations: Vec<String>,
    status: &'static str,
}

/// Every coordinate vector componentwise below `top`, last coordinate fastest.
fn each_in_box(top: &[u64], mut f: impl FnMut(&[u64]) -> anyhow::Result<()>) -> anyhow::Result<()> {
    let mut cur = vec![0u64; top.len()];
    loop {
        f(&cur)?;
        let mut i = top.len();
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if cur[i] < top[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

fn box_cells(top: &[u64]) -> u64 {
    top.iter().fold(1u64, |acc, &t| acc.saturating_mul(t.saturating_add(1)))
}

fn guard_box(top: &[u64], limit: Option<u64>) -> anyhow::Result<()> {
    let limit = limit.unwrap_or(DEFAULT_CELL_LIMIT);
    if box_cells(top) > limit {
        return Err(CoreError::ResourceLimit { what: "verification box", limit }.into());
    }
    Ok(())
}

fn parse_box3(text: Option<String>, default: [u64; 3]) -> anyhow::Result<[u64; 3]> {
    match text {
        None => Ok(default),
        Some(t) => {
            let v = parse_list(&t, "--box")?;
            v.try_into().map_err(|_| usage("--box needs three values x0,x1,x2"))
        }
    }
}

fn cmd_verify(a: VerifyArgs, cfg: &Config, out: &mut dyn Write) -> anyhow::Result<i32> {
    let format = cfg.format(a.common.format, Format::Human)?;
    reject_csv(format, "verify")?;
    let limit = cfg.or(a.common.limit, "limit")?;
    let max = cfg.or(a.max, "max")?;
    let bounds_text = cfg.or(a.bounds.clone(), "box")?;
    let mut game = a.game.clone();
    let mut violations = Vec::new();
    let mut checked = 0u64;
    let (rules, bounds): (GameRules, Vec<u64>) = match a.check {
        Check::Theorem1 | Check::Ppos | Check::Appendix => {
            let default_n = if a.check == Check::Ppos { 2 } else { 3 };
            let rules = resolve_game(&game, cfg, None, default_n)?;
            let n = rules.n();
            if !rules.has_extra_pile() {
                return Err(usage("this check is about Exco-Nim; use --game exco"));
            }
            if a.check != Check::Ppos && n < 3 {
                return Err(usage("the closed form needs --n 3 or more"));
            }
            let side = max.unwrap_or(match a.check {
                Check::Theorem1 => 6,
                Check::Ppos => 8,
                _ => 4,
            });
            let top = vec![side; n + 1];
            guard_box(&top, limit)?;
            let mut memo = Memo::with_limit(rules, limit.unwrap_or(DEFAULT_VISIT_LIMIT));
            each_in_box(&top, |c| {
                let p = Position::from_coords(c.to_vec())?;
                match a.check {
                    Check::Theorem1 => {
                        checked += 1;
                        let (closed, brute) = (g_closed(&p)?, sg_bruteforce(&rules, &p, &mut memo)?);
                        if closed != brute {
                            violations.push(format!("{p}: formula {closed}, search {brute}"));
                        }
                    }
                    Check::Ppos => {
                        checked += 1;
                        let zero = sg_bruteforce(&rules, &p, &mut memo)? == 0;
                        if zero != is_p_position_exco(&p) {
                            violations.push(format!("{p}: SG zero is {zero}"));
                        }
                    }
                    _ => {
                        for v in 0..g_closed(&p)? {
                            checked += 1;
                            match construct_move_appendix(&p, v) {
                                Ok(to) if is_legal_move(&rules, &p, &to)? && g_closed(&to)? == v => {}
                                Ok(to) => violations.push(format!("{p} -> {to} for value {v}")),
                                Err(e) => violations.push(e.to_string()),
                            }
                        }
                    }
                }
                Ok(())
            })?;
            (rules, top)
        }
        Check::Moore => {
            if game.game.is_none() && !cfg.0.contains_key("game") {
                game.game = Some("moore".into());
            }
            if game.k.is_none() && !cfg.0.contains_key("k") {
                game.k = Some(2);
            }
            let rules = resolve_game(&game, cfg, None, 4)?;
            let GameRules::MooreNim { n, k } = rules else {
                return Err(usage("verify moore needs --game moore"));
            };
            let top = vec![max.unwrap_or(6); n];
            guard_box(&top, limit)?;
            let mut memo = Memo::with_limit(rules, limit.unwrap_or(DEFAULT_VISIT_LIMIT));
            each_in_box(&top, |c| {
                let p = Position::main_only(c.to_vec());
                checked += 1;
                let zero = sg_bruteforce(&rules, &p, &mut memo)? == 0;
                if zero != moore_sum(&p, k)?.is_zero() {
                    violations.push(format!("{}: SG zero is {zero}", show(&rules, &p)));
                }
                Ok(())
            })?;
            (rules, std::iter::once(0).chain(top).collect())
        }
        Check::Axioms => {
            let rules = resolve_game(&game, cfg, None, 2)?;
            let side = max.unwrap_or(4);
            let x0 = if rules.has_extra_pile() { side } else { 0 };
            let top: Vec<u64> = std::iter::once(x0).chain(std::iter::repeat(side).take(rules.n())).collect();
            guard_box(&top, limit)?;
            let rep = verify_sg_axioms(&rules, &top)?;
            checked = rep.checked;
            violations.extend(rep.violations.iter().map(|v| format!("{:?} at {}: {}", v.axiom, v.pos, v.detail)));
            (rules, top)
        }
        Check::Shift => {
            let b = parse_box3(bounds_text, [3, 16, 16])?;
            let ks: Vec<u32> = match cfg.or(a.game.k, "k")? {
                Some(k) => vec![u32::try_from(k).map_err(|_| usage("--k is too large"))?],
                None => vec![1, 2, 3],
            };
            let reach = 1u64 << ks.iter().max().copied().unwrap_or(0).min(40);
            let t = n2_table([b[0], b[1] + reach, b[2] + reach], cfg.or(a.common.cache.clone(), "cache")?.as_deref(), limit)?;
            for k in ks {
                let rep = verify_shift_lemma(b, k, &t)?;
                checked += rep.checked;
                violations.extend(
                    rep.counterexamples.iter().map(|c| format!("k={k} at {}: expected {}, got {}", c.pos, c.expected, c.actual)),
                );
            }
            (GameRules::ExcoNim { n: 2 }, b.to_vec())
        }
        Check::Prop4 => {
            let b = parse_box3(bounds_text, [3, 32, 512])?;
            let t = n2_table(b, cfg.or(a.common.cache.clone(), "cache")?.as_deref(), limit)?;
            let ranges = SweepRanges { x0: Span::new(0, b[0]), x1: Span::new(0, b[1]), x2_max: b[2] };
            let rep = check_conjecture(ConjectureId::P4, &ranges, &t)?;
            checked = rep.checked;
            violations.extend(rep.counterexamples.iter().map(|c| format!("{}: expected {}, got {}", c.pos, c.expected, c.actual)));
            (GameRules::ExcoNim { n: 2 }, b.to_vec())
        }
    };

    let name = a.check.to_possible_value().expect("no skipped variants").get_name().to_string();
    let passed = violations.is_empty();
    let report = CheckReport {
        check: name.clone(),
        game: rules.to_string(),
        bounds,
        checked,
        violations,
        status: if passed { "pass" } else { "fail" },
    };
    match format {
        Format::Json => write_json(out, &report)?,
        _ => {
            writeln!(out, "{name}: {} ({} checks, {})", report.status, checked, rules)?;
            for v in &report.violations {
                writeln!(out, "  violation: {v}")?;
            }
        }
    }
    Ok(if passed { EXIT_OK } else { EXIT_NEGATIVE })
}

// ---- conjecture ----

fn merge(into: &mut ConjectureReport, part: ConjectureReport) {
    into.checked += part.checked;
    into.counterexamples.extend(part.counterexamples);
    into.thresholds.extend(part.thresholds);
    if !into.counterexamples.is_empty() {
        into.status = Status::Refuted;
    }
}

fn cmd_conjecture(a: ConjectureArgs, cfg: &Config, out: &mut dyn Write) -> anyhow::Result<i32> {
    let format = cfg.format(a.common.format, Format::Json)?;
    reject_csv(format, "conjecture")?;
    let id = a.which.id();
    let default_x0 = match a.which {
        Conj::C5 => Span::single(1),
        Conj::C4 => Span::new(1, 3),
        _ => Span::new(0, 3),
    };
    let x0 = match cfg.or(a.x0, "x0")? {
        Some(t) => parse_span(&t, "--x0")?,
        None => default_x0,
    };
    let x2_max = cfg.or(a.x2_max, "x2-max")?.unwrap_or(256);
    let x1_values: Option<Vec<u64>> = match &a.x1_pow2 {
        Some(t) => {
            let e = parse_span(t, "--x1-pow2")?;
            if e.hi >= 63 {
                return Err(usage("--x1-pow2 exponents must stay below 63"));
            }
            Some(e.iter().map(|e| 1u64 << e).collect())
        }
        None => None,
    };
    let x1 = match (&x1_values, cfg.or(a.x1, "x1")?) {
        (Some(v), _) => Span::new(v.first().copied().unwrap_or(1), v.last().copied().unwrap_or(0)),
        (None, Some(t)) => parse_span(&t, "--x1")?,
        (None, None) => Span::new(0, 31),
    };
    let ranges = SweepRanges { x0, x1, x2_max };
    let need = [x0.hi, x1.hi, x2_max.max(x1.hi)];
    let cache = cfg.or(a.common.cache.clone(), "cache")?;
    let limit = cfg.or(a.common.limit, "limit")?;
    let table = if x0.is_empty() || x1.is_empty() { None } else { Some(n2_table(need, cache.as_deref(), limit)?) };

    let report = match (&table, &x1_values) {
        (None, _) => check_conjecture(id, &ranges, &SgTable::build(GameRules::ExcoNim { n: 2 }, &[0, 0, 0])?)?,
        (Some(t), None) => check_conjecture(id, &ranges, t)?,
        (Some(t), Some(values)) => {
            let mut all = check_conjecture(id, &SweepRanges { x1: Span::new(1, 0), ..ranges }, t)?;
            all.range = ranges;
            for &v in values {
                let part = check_conjecture(id, &SweepRanges { x1: Span::single(v), ..ranges }, t)?;
                all.params.extend(part.params.clone());
                merge(&mut all, part);
            }
            all
        }
    };
    match format {
        Format::Json => write_json(out, &report)?,
        _ => {
            let status = match report.status {
                Status::Supported => "supported",
                Status::Refuted => "refuted",
            };
            writeln!(out, "{}: {status} ({} positions checked)", report.conjecture, report.checked)?;
            for c in &report.counterexamples {
                writeln!(out, "  counterexample {}: expected {}, actual {}", c.pos, c.expected, c.actual)?;
            }
            for th in &report.thresholds {
                let settled = if th.settled { "settled" } else { "unsettled" };
                write!(out, "  ({},{}): threshold {} up to x2 = {} ({settled})", th.x0, th.x1, th.threshold, th.x2_max)?;
                if let Some(p) = &th.pattern {
                    write!(out, " pattern {p:?}")?;
                }
                writeln!(out)?;
            }
        }
    }
    Ok(match report.status {
        Status::Supported => EXIT_OK,
        Status::Refuted => EXIT_NEGATIVE,
    })
}

// ---- table ----

#[derive(Serialize)]
struct Row {
    x2: u64,
    g: u64,
    u: u64,
    delta: u64,
}

fn cmd_table(a: TableArgs, cfg: &Config, out: &mut dyn Write) -> anyhow::Result<i32> {
    let format = cfg.format(a.common.format, Format::Csv)?;
    let x0 = cfg.or(a.x0, "x0")?.ok_or_else(|| usage("--x0 is required"))?;
    let x1 = cfg.or(a.x1, "x1")?.ok_or_else(|| usage("--x1 is required"))?;
    let x2 = parse_span(&cfg.or(a.x2, "x2")?.ok_or_else(|| usage("--x2 is required"))?, "--x2")?;
    let mut rows = Vec::new();
    if !x2.is_empty() {
        let cache = cfg.or(a.common.cache.clone(), "cache")?;
        let t = n2_table([x0, x1, x2.hi], cache.as_deref(), cfg.or(a.common.limit, "limit")?)?;
        for x2 in x2.iter() {
            let g = t.value_at(&[x0, x1, x2]).ok_or_else(|| anyhow!("({x0},{x1},{x2}) missing from table"))?;
            let u = x0 + x1 + x2;
            rows.push(Row { x2, g, u, delta: u - g });
        }
    }
    match format {
        Format::Json => write_json(out, &rows)?,
        Format::Csv => {
            writeln!(out, "x2,g,u,delta")?;
            for r in &rows {
                writeln!(out, "{},{},{},{}", r.x2, r.g, r.u, r.delta)?;
            }
        }
        Format::Human => {
            writeln!(out, "{:>8} {:>8} {:>8} {:>6}", "x2", "G", "u", "u-G")?;
            for r in &rows {
                writeln!(out, "{:>8} {:>8} {:>8} {:>6}", r.x2, r.g, r.u, r.delta)?;
            }
        }
    }
    Ok(EXIT_OK)
}

// ---- play ----

/// One token off the largest pile; ties go to the first such pile unless a
/// seed asks for a shuffled choice.
fn fallback_move(rules: &GameRules, pos: &Position, rng: Option<&mut StdRng>) -> Position {
    let first = if rules.has_extra_pile() { 0 } else { 1 };
    let c = pos.coords();
    let top = c[first..].iter().copied().max().unwrap_or(0);
    let ties: Vec<usize> = (first..c.len()).filter(|&i| c[i] == top).collect();
    let i = match rng {
        Some(r) => *ties.choose(r).expect("at least one pile"),
        None => ties[0],
    };
    let mut next = c.to_vec();
    next[i] -= 1;
    Position::from_coords(next).expect("same shape")
}

fn cmd_play(a: PlayArgs, cfg: &Config, input: &mut dyn BufRead, out: &mut dyn Write) -> anyhow::Result<i32> {
    let (rules, mut pos) = parse_position(&a.game, cfg, a.pos)?;
    let limit = cfg.or(a.common.limit, "limit")?;
    let mut rng = cfg.or(a.seed, "seed")?.map(StdRng::seed_from_u64);
    let mut human_turn = a.human_first;
    writeln!(out, "{rules}, start at {}", show(&rules, &pos))?;
    loop {
        if pos.total() == 0 {
            let winner = if human_turn { "engine" } else { "you" };
            writeln!(out, "no moves left; {winner} won")?;
            return Ok(EXIT_OK);
        }
        if human_turn {
            write!(out, "position {}; your move> ", show(&rules, &pos))?;
            out.flush()?;
            let mut line = String::new();
            if input.read_line(&mut line)? == 0 {
                writeln!(out)?;
                writeln!(out, "input closed; game abandoned")?;
                return Ok(EXIT_USAGE);
            }
            let text = line.trim();
            let next = match parse_list(text, "move") {
                Ok(v) if rules.has_extra_pile() => Position::from_coords(v).ok(),
                Ok(v) => Some(Position::main_only(v)),
                Err(_) => None,
            };
            let Some(next) = next.filter(|q| q.n() == pos.n()) else {
                writeln!(out, "could not read {text:?}; enter {} numbers like {}", pos.coords().len() - usize::from(!rules.has_extra_pile()), show(&rules, &pos))?;
                continue;
            };
            if let Some(why) = move_violation(&rules, &pos, &next)? {
                writeln!(out, "illegal move: {why}")?;
                continue;
            }
            pos = next;
        } else {
            let next = match winning_move(&rules, &pos, limit)? {
                Some(to) => to,
                None => fallback_move(&rules, &pos, rng.as_mut()),
            };
            writeln!(out, "engine: {} -> {}", show(&rules, &pos), show(&rules, &next))?;
            pos = next;
        }
        human_turn = !human_turn;
    }
}

// ---- cache ----

fn cmd_cache(action: CacheAction, cfg: &Config, out: &mut dyn Write) -> anyhow::Result<i32> {
    match action {
        CacheAction::Build { game, bounds, out: path, limit } => {
            let text = cfg.or(bounds, "box")?.ok_or_else(|| usage("--box is required"))?;
            let b = parse_list(&text, "--box")?;
            let rules = resolve_game(&game, cfg, None, b.len().saturating_sub(1))?;
            if b.len() != rules.n() + 1 {
                return Err(usage(format!("--box needs {} values for {rules}", rules.n() + 1)));
            }
            let limit = cfg.or(limit, "limit")?.unwrap_or(DEFAULT_CELL_LIMIT);
            let t = match rules {
                GameRules::ExcoNim { n: 2 } => sg_table_n2_with_limit(b[0], b[1], b[2], limit)?,
                _ => SgTable::build_with_limit(rules, &b, limit)?,
            };
            save_cache_file(&t, &path).with_context(|| format!("writing {}", path.display()))?;
            writeln!(out, "wrote {} cells of {rules} to {}", t.len(), path.display())?;
            Ok(EXIT_OK)
        }
        CacheAction::Check { path } => match load_cache_file(&path) {
            Ok(t) => {
                let b: Vec<String> = t.bounds().iter().map(u64::to_string).collect();
                writeln!(out, "ok: {} box={} ({} cells, all consistent)", t.rules(), b.join(","), t.len())?;
                Ok(EXIT_OK)
            }
            Err(CoreError::Cache(e @ nimlab::CacheError::Inconsistent { .. })) => {
                writeln!(out, "inconsistent: {e}")?;
                Ok(EXIT_NEGATIVE)
            }
            Err(e) => Err(anyhow::Error::new(e).context(format!("reading {}", path.display()))),
        },
    }
}
