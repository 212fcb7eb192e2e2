//! `serpent-net`: encrypt/decrypt 16-byte-block files, dump key schedules,
//! benchmark the network designs under the cycle-accounting scheduler, and
//! verify the bundled known-answer vectors.
//!
//! Exit codes: 0 success, 1 runtime or verification failure, 2 bad
//! parameters or malformed input.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use procnet::CostModel;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serpent::bytes::{blocks_from_bytes, blocks_to_bytes, parse_key_hex};
use serpent::cipher::{decrypt_block, encrypt_blocks, Block};
use serpent::kat::{parse_kat_text, run_kat_suite, KatVector, BUNDLED_KAT_TEXT};
use serpent::networks::{
    compare_designs, run_keyschedule, serpent_encrypt_net, EncDesign, KsDesign, NetworkDesign,
    RunOptions,
};
use serpent::schedule::{key_schedule, Key256, SubKeySchedule};
use serpent::standard::{decrypt_block_standard, encrypt_block_standard};

#[derive(Parser)]
#[command(
    name = "serpent-net",
    version,
    about = "Serpent block cipher over message-passing process networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt a raw binary file of 16-byte blocks.
    Encrypt(CryptoArgs),
    /// Decrypt a raw binary file of 16-byte blocks (sequential reference).
    Decrypt(CryptoArgs),
    /// Print the 33 groups of round subkeys for a key.
    Keyschedule {
        /// Key as hex, MSB-first nibbles; length selects 128/192/256 bits.
        #[arg(long)]
        key: String,
        /// Declared key width; must match the hex length when given.
        #[arg(long = "key-bits")]
        key_bits: Option<usize>,
        /// REF (direct computation), KS1 or KS2 (network designs).
        #[arg(long, default_value = "REF")]
        design: String,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run designs under the deterministic cycle-accounting scheduler and
    /// report simulated throughput and structure metrics.
    Bench {
        /// Designs to measure: ENC1, ENC2, ENC3 or "all", comma separated.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        design: Vec<String>,
        /// Stage count for ENC3: a number or an inclusive range like 1..8.
        #[arg(long, default_value = "2")]
        n: String,
        /// Key-schedule design feeding the encryption network.
        #[arg(long, default_value = "KS1")]
        ks: String,
        /// Number of random blocks to push through each design.
        #[arg(long, default_value_t = 32)]
        blocks: usize,
        /// Seed for the block generator and the stepped scheduler.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// text (table), kv (key=value lines per design) or json.
        #[arg(long = "metrics-format", default_value = "text")]
        metrics_format: String,
    },
    /// Check the known-answer vectors and cross-design equivalence.
    Verify {
        /// Only the known-answer vectors, skipping the design matrix.
        #[arg(long)]
        quick: bool,
        /// Alternative KAT file (default: the bundled vectors).
        #[arg(long = "kat-file")]
        kat_file: Option<PathBuf>,
    },
    /// List the available network designs.
    ListDesigns,
}

#[derive(Args)]
struct CryptoArgs {
    /// Key as hex, MSB-first nibbles; length selects 128/192/256 bits.
    #[arg(long)]
    key: String,
    /// Declared key width; must match the hex length when given.
    #[arg(long = "key-bits")]
    key_bits: Option<usize>,
    /// Input file (raw binary, length a multiple of 16).
    #[arg(long = "in")]
    input: PathBuf,
    /// Output file.
    #[arg(long)]
    out: PathBuf,
    /// Block representation: bitsliced or standard. The two compute the
    /// same function through different data paths.
    #[arg(long, default_value = "bitsliced")]
    mode: String,
    /// REF (sequential) or a network design: ENC1, ENC2, ENC3.
    #[arg(long, default_value = "REF")]
    design: String,
    /// Stage count for ENC3.
    #[arg(long)]
    n: Option<usize>,
    /// Key-schedule design when a network design is selected.
    #[arg(long, default_value = "KS1")]
    ks: String,
}

enum CliError {
    /// Bad parameters or malformed input: exit 2.
    Usage(String),
    /// Runtime failure (I/O, network run, verification): exit 1.
    Runtime(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> CliError {
        CliError::Usage(msg.into())
    }

    fn runtime(msg: impl Into<String>) -> CliError {
        CliError::Runtime(msg.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Encrypt(args) => transform(args, true),
        Command::Decrypt(args) => transform(args, false),
        Command::Keyschedule {
            key,
            key_bits,
            design,
            out,
        } => cmd_keyschedule(&key, key_bits, &design, out),
        Command::Bench {
            design,
            n,
            ks,
            blocks,
            seed,
            metrics_format,
        } => cmd_bench(&design, &n, &ks, blocks, seed, &metrics_format),
        Command::Verify { quick, kat_file } => cmd_verify(quick, kat_file),
        Command::ListDesigns => {
            print!("{}", design_listing());
            Ok(())
        }
    }
}

fn parse_key(hex_key: &str, bits: Option<usize>) -> Result<Key256, CliError> {
    parse_key_hex(hex_key, bits).map_err(|e| CliError::usage(e.to_string()))
}

fn parse_mode(mode: &str) -> Result<bool, CliError> {
    match mode.to_ascii_lowercase().as_str() {
        "bitsliced" => Ok(true),
        "standard" => Ok(false),
        other => Err(CliError::usage(format!(
            "unknown mode '{other}' (expected bitsliced or standard)"
        ))),
    }
}

fn parse_ks(ks: &str) -> Result<KsDesign, CliError> {
    match ks.to_ascii_uppercase().as_str() {
        "KS1" => Ok(KsDesign::Ks1),
        "KS2" => Ok(KsDesign::Ks2),
        other => Err(CliError::usage(format!(
            "unknown key-schedule design '{other}' (expected KS1 or KS2)"
        ))),
    }
}

fn parse_enc(design: &str, n: Option<usize>) -> Result<Option<EncDesign>, CliError> {
    match design.to_ascii_uppercase().as_str() {
        "REF" => Ok(None),
        "ENC1" => Ok(Some(EncDesign::Enc1)),
        "ENC2" => Ok(Some(EncDesign::Enc2)),
        "ENC3" => {
            let stages = n.ok_or_else(|| {
                CliError::usage("ENC3 requires --n (pipelined stage count 1..=31)")
            })?;
            Ok(Some(EncDesign::Enc3 { stages }))
        }
        other => Err(CliError::usage(format!(
            "unknown design '{other}' (expected REF, ENC1, ENC2 or ENC3)"
        ))),
    }
}

fn read_blocks(path: &PathBuf) -> Result<Vec<Block>, CliError> {
    let data = fs::read(path)
        .map_err(|e| CliError::runtime(format!("reading {}: {e}", path.display())))?;
    blocks_from_bytes(&data).map_err(|e| CliError::usage(e.to_string()))
}

fn transform(args: CryptoArgs, encrypting: bool) -> Result<(), CliError> {
    let key = parse_key(&args.key, args.key_bits)?;
    let bitsliced = parse_mode(&args.mode)?;
    let enc = parse_enc(&args.design, args.n)?;
    let blocks = read_blocks(&args.input)?;

    let out_blocks = match (encrypting, enc) {
        (true, Some(enc_design)) => {
            let design = NetworkDesign::new(parse_ks(&args.ks)?, enc_design);
            design
                .validate()
                .map_err(|e| CliError::usage(e.to_string()))?;
            let run = serpent_encrypt_net(design, &key, &blocks, RunOptions::default())
                .map_err(|e| CliError::runtime(e.to_string()))?;
            run.ciphertexts
        }
        (true, None) => {
            let ks = key_schedule(&key);
            if bitsliced {
                encrypt_blocks(&ks, &blocks)
            } else {
                blocks
                    .iter()
                    .map(|b| Block::from_bytes(&encrypt_block_standard(&ks, &b.to_bytes())))
                    .collect()
            }
        }
        (false, Some(_)) => {
            return Err(CliError::usage(
                "decryption runs on the sequential reference; use --design REF",
            ))
        }
        (false, None) => {
            let ks = key_schedule(&key);
            if bitsliced {
                blocks.iter().map(|b| decrypt_block(&ks, *b)).collect()
            } else {
                blocks
                    .iter()
                    .map(|b| Block::from_bytes(&decrypt_block_standard(&ks, &b.to_bytes())))
                    .collect()
            }
        }
    };
    fs::write(&args.out, blocks_to_bytes(&out_blocks))
        .map_err(|e| CliError::runtime(format!("writing {}: {e}", args.out.display())))?;
    Ok(())
}

fn schedule_text(ks: &SubKeySchedule) -> String {
    let mut out = String::new();
    for (j, group) in ks.0.iter().enumerate() {
        let _ = writeln!(
            out,
            "k[{j:02}] = {:08x} {:08x} {:08x} {:08x}",
            group[0], group[1], group[2], group[3]
        );
    }
    out
}

fn cmd_keyschedule(
    hex_key: &str,
    bits: Option<usize>,
    design: &str,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let key = parse_key(hex_key, bits)?;
    let schedule = match design.to_ascii_uppercase().as_str() {
        "REF" => key_schedule(&key),
        "KS1" | "KS2" => {
            let ks = parse_ks(design)?;
            run_keyschedule(ks, &key, RunOptions::default())
                .map_err(|e| CliError::runtime(e.to_string()))?
                .0
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown key-schedule design '{other}' (expected REF, KS1 or KS2)"
            )))
        }
    };
    let text = schedule_text(&schedule);
    match out {
        Some(path) => fs::write(&path, text)
            .map_err(|e| CliError::runtime(format!("writing {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Parse `--n`: either one stage count or an inclusive range `a..b`.
fn parse_stage_range(n: &str) -> Result<Vec<usize>, CliError> {
    if let Some((a, b)) = n.split_once("..") {
        let a: usize = a
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("bad stage range '{n}'")))?;
        let b: usize = b
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("bad stage range '{n}'")))?;
        if a == 0 || b < a {
            return Err(CliError::usage(format!("bad stage range '{n}'")));
        }
        Ok((a..=b).collect())
    } else {
        let v: usize = n
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("bad stage count '{n}'")))?;
        Ok(vec![v])
    }
}

fn cmd_bench(
    designs: &[String],
    n: &str,
    ks: &str,
    blocks: usize,
    seed: u64,
    format: &str,
) -> Result<(), CliError> {
    let ks = parse_ks(ks)?;
    let stages = parse_stage_range(n)?;
    let mut selected: Vec<NetworkDesign> = Vec::new();
    for name in designs {
        match name.to_ascii_uppercase().as_str() {
            "ALL" => {
                selected.push(NetworkDesign::new(ks, EncDesign::Enc1));
                selected.push(NetworkDesign::new(ks, EncDesign::Enc2));
                for &s in &stages {
                    selected.push(NetworkDesign::new(ks, EncDesign::Enc3 { stages: s }));
                }
            }
            "ENC1" => selected.push(NetworkDesign::new(ks, EncDesign::Enc1)),
            "ENC2" => selected.push(NetworkDesign::new(ks, EncDesign::Enc2)),
            "ENC3" => {
                for &s in &stages {
                    selected.push(NetworkDesign::new(ks, EncDesign::Enc3 { stages: s }));
                }
            }
            other => {
                return Err(CliError::usage(format!(
                    "unknown design '{other}' (expected ENC1, ENC2, ENC3 or all)"
                )))
            }
        }
    }
    for d in &selected {
        d.validate().map_err(|e| CliError::usage(e.to_string()))?;
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let key_bytes: Vec<u8> = (0..32).map(|_| rng.gen()).collect();
    let key = Key256::from_bytes(&key_bytes).expect("32-byte key");
    let block_list: Vec<Block> = (0..blocks)
        .map(|_| Block([rng.gen(), rng.gen(), rng.gen(), rng.gen()]))
        .collect();
    let cmp = compare_designs(&selected, &key, &block_list, CostModel::unit())
        .map_err(|e| CliError::runtime(e.to_string()))?;

    match format.to_ascii_lowercase().as_str() {
        "text" => {
            println!("blocks={} (all designs produced identical ciphertexts)", cmp.blocks);
            println!(
                "{:<14} {:>12} {:>18} {:>10} {:>7} {:>9} {:>11}",
                "design", "total_cycles", "cycles_per_block", "fill", "procs", "channels", "max_active"
            );
            for row in &cmp.rows {
                let r = &row.report;
                println!(
                    "{:<14} {:>12} {:>18.2} {:>10} {:>7} {:>9} {:>11}",
                    row.label,
                    r.total_cycles,
                    r.cycles_per_block,
                    r.pipeline_fill_latency,
                    r.process_count,
                    r.channel_count,
                    r.max_concurrent_active
                );
            }
        }
        "kv" => {
            println!("blocks={}", cmp.blocks);
            println!("outputs_match=true");
            for row in &cmp.rows {
                println!("design={}", row.label);
                print!("{}", row.report.to_kv_text());
            }
        }
        "json" => {
            let rows: Vec<serde_json::Value> = cmp
                .rows
                .iter()
                .map(|row| {
                    serde_json::json!({
                        "design": row.label,
                        "report": row.report,
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "blocks": cmp.blocks,
                "outputs_match": true,
                "rows": rows,
            });
            println!("{doc}");
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown metrics format '{other}' (expected text, kv or json)"
            )))
        }
    }
    Ok(())
}

fn load_vectors(kat_file: Option<PathBuf>) -> Result<Vec<KatVector>, CliError> {
    let text = match &kat_file {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::runtime(format!("reading {}: {e}", path.display())))?,
        None => BUNDLED_KAT_TEXT.to_string(),
    };
    parse_kat_text(&text).map_err(|e| CliError::usage(e.to_string()))
}

fn cmd_verify(quick: bool, kat_file: Option<PathBuf>) -> Result<(), CliError> {
    let vectors = load_vectors(kat_file)?;
    if vectors.is_empty() {
        return Err(CliError::usage("KAT file contains no vectors"));
    }
    let failures = run_kat_suite(&vectors);
    if failures.is_empty() {
        println!("known-answer vectors: {} passed", vectors.len());
    } else {
        for f in &failures {
            println!("FAIL {f}");
        }
        return Err(CliError::runtime(format!(
            "{} of {} known-answer checks failed",
            failures.len(),
            vectors.len()
        )));
    }
    if quick {
        return Ok(());
    }

    let mut rng = StdRng::seed_from_u64(1);
    let key_bytes: Vec<u8> = (0..32).map(|_| rng.gen()).collect();
    let key = Key256::from_bytes(&key_bytes).expect("32-byte key");
    let blocks: Vec<Block> = (0..16)
        .map(|_| Block([rng.gen(), rng.gen(), rng.gen(), rng.gen()]))
        .collect();
    let expect = encrypt_blocks(&key_schedule(&key), &blocks);
    let mut mismatches = Vec::new();
    for ks in [KsDesign::Ks1, KsDesign::Ks2] {
        for enc in [EncDesign::Enc1, EncDesign::Enc2, EncDesign::Enc3 { stages: 2 }] {
            let design = NetworkDesign::new(ks, enc);
            match serpent_encrypt_net(design, &key, &blocks, RunOptions::default()) {
                Ok(run) if run.ciphertexts == expect => {}
                Ok(_) => mismatches.push(format!("{design}: ciphertext mismatch")),
                Err(e) => mismatches.push(format!("{design}: {e}")),
            }
        }
    }
    if mismatches.is_empty() {
        println!("design equivalence: 6 configurations passed");
        Ok(())
    } else {
        for m in &mismatches {
            println!("FAIL {m}");
        }
        Err(CliError::runtime(format!(
            "{} design configurations failed",
            mismatches.len()
        )))
    }
}

fn design_listing() -> String {
    let mut out = String::new();
    let _ = writeln!(out, "KS1      data-parallel key schedule: 32 S-box processes in a 4x8 grid plus a trailing S3");
    let _ = writeln!(out, "KS2      streamed key schedule: one bank of 8 S-box processes reused over a group stream");
    let _ = writeln!(out, "ENC1     fully pipelined encryption: 31 round processes in a line");
    let _ = writeln!(out, "ENC2     streamed encryption: a single round process folds every block through all rounds");
    let _ = writeln!(out, "ENC3(n)  hybrid encryption: n pipelined rounds, the remaining 31-n streamed (--n, 1..=31)");
    let _ = writeln!(out, "REF      sequential reference (no process network)");
    out
}
