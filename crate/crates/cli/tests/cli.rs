//! End-to-end checks of the `serpent-net` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_serpent-net"))
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("spawn serpent-net");
    assert!(
        out.status.success(),
        "command failed: {:?}\nstderr: {}",
        cmd,
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(
        out.stderr.is_empty(),
        "success wrote to stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stderr_line_count(out: &Output) -> usize {
    String::from_utf8_lossy(&out.stderr).trim_end().lines().count()
}

const KEY128: &str = "000102030405060708090a0b0c0d0e0f";

#[test]
fn encrypt_decrypt_round_trip_one_mebibyte() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("plain.bin");
    let cipher = dir.path().join("cipher.bin");
    let restored = dir.path().join("restored.bin");
    let mut rng = StdRng::seed_from_u64(7);
    let data: Vec<u8> = (0..1 << 20).map(|_| rng.gen()).collect();
    fs::write(&plain, &data).unwrap();

    run_ok(bin().args(["encrypt", "--key", KEY128])
        .arg("--in").arg(&plain)
        .arg("--out").arg(&cipher));
    assert_ne!(fs::read(&cipher).unwrap(), data);
    run_ok(bin().args(["decrypt", "--key", KEY128])
        .arg("--in").arg(&cipher)
        .arg("--out").arg(&restored));
    assert_eq!(fs::read(&restored).unwrap(), data);
}

#[test]
fn standard_mode_encrypt_matches_published_vector() {
    // First bundled vector: key 80.., all-zero plaintext.
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("pt.bin");
    let cipher = dir.path().join("ct.bin");
    fs::write(&plain, [0u8; 16]).unwrap();
    run_ok(bin()
        .args(["encrypt", "--key", "80000000000000000000000000000000", "--mode", "standard"])
        .arg("--in").arg(&plain)
        .arg("--out").arg(&cipher));
    assert_eq!(
        hex::encode(fs::read(&cipher).unwrap()),
        "264e5481eff42a4606abda06c0bfda3d"
    );
}

#[test]
fn modes_and_designs_agree_on_ciphertext() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("pt.bin");
    let mut rng = StdRng::seed_from_u64(8);
    let data: Vec<u8> = (0..64).map(|_| rng.gen()).collect();
    fs::write(&plain, &data).unwrap();

    let mut outputs = Vec::new();
    for (label, extra) in [
        ("ref-bitsliced", vec!["--mode", "bitsliced"]),
        ("ref-standard", vec!["--mode", "standard"]),
        ("enc2", vec!["--design", "ENC2"]),
        ("enc3-2", vec!["--design", "ENC3", "--n", "2"]),
        ("enc3-2-ks2", vec!["--design", "ENC3", "--n", "2", "--ks", "KS2"]),
    ] {
        let out_path = dir.path().join(format!("{label}.bin"));
        let mut cmd = bin();
        cmd.args(["encrypt", "--key", KEY128]);
        cmd.args(&extra);
        cmd.arg("--in").arg(&plain).arg("--out").arg(&out_path);
        run_ok(&mut cmd);
        outputs.push(fs::read(&out_path).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn bad_key_hex_exits_2_with_single_line_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("pt.bin");
    fs::write(&plain, [0u8; 16]).unwrap();
    let out = bin()
        .args(["encrypt", "--key", "zz00"])
        .arg("--in").arg(&plain)
        .arg("--out").arg(dir.path().join("ct.bin"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_line_count(&out), 1);
}

#[test]
fn unaligned_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("pt.bin");
    fs::write(&plain, [0u8; 17]).unwrap();
    let out = bin()
        .args(["encrypt", "--key", KEY128])
        .arg("--in").arg(&plain)
        .arg("--out").arg(dir.path().join("ct.bin"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_line_count(&out), 1);
}

#[test]
fn network_decrypt_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("pt.bin");
    fs::write(&plain, [0u8; 16]).unwrap();
    let out = bin()
        .args(["decrypt", "--key", KEY128, "--design", "ENC2"])
        .arg("--in").arg(&plain)
        .arg("--out").arg(dir.path().join("out.bin"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_bench_design_exits_2() {
    let out = bin().args(["bench", "--design", "ENC9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_line_count(&out), 1);
}

#[test]
fn bench_json_contains_every_report_field() {
    let out = run_ok(bin().args([
        "bench",
        "--design",
        "all",
        "--blocks",
        "8",
        "--metrics-format",
        "json",
    ]));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["outputs_match"], true);
    assert_eq!(doc["blocks"], 8);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let report = &row["report"];
        for field in [
            "total_cycles",
            "cycles_per_block",
            "pipeline_fill_latency",
            "process_count",
            "channel_count",
            "max_concurrent_active",
        ] {
            assert!(
                report.get(field).is_some_and(|v| v.is_number()),
                "missing {field}: {report}"
            );
        }
    }
}

#[test]
fn bench_sweep_is_non_increasing_in_stage_count() {
    let out = run_ok(bin().args([
        "bench",
        "--design",
        "ENC3",
        "--n",
        "1..4",
        "--blocks",
        "16",
        "--metrics-format",
        "json",
    ]));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let cpb: Vec<f64> = rows
        .iter()
        .map(|r| r["report"]["cycles_per_block"].as_f64().unwrap())
        .collect();
    assert!(
        cpb.windows(2).all(|w| w[1] <= w[0]),
        "cycles_per_block not non-increasing: {cpb:?}"
    );
}

#[test]
fn bench_output_is_byte_deterministic() {
    let args = ["bench", "--design", "ENC2", "--blocks", "8", "--seed", "3"];
    let a = run_ok(bin().args(args));
    let b = run_ok(bin().args(args));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_passes_on_fresh_build() {
    let out = run_ok(bin().args(["verify"]));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("known-answer vectors"), "{text}");
    assert!(text.contains("design equivalence"), "{text}");
}

#[test]
fn verify_quick_covers_all_key_sizes() {
    let out = run_ok(bin().args(["verify", "--quick"]));
    let text = String::from_utf8_lossy(&out.stdout);
    // At least 4 vectors passed (the bundled file carries 13 across
    // 128/192/256-bit keys).
    assert!(text.contains("13 passed"), "{text}");
}

#[test]
fn verify_names_failing_vectors_and_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let kat = dir.path().join("bad.txt");
    // Second line carries a corrupted ciphertext.
    fs::write(
        &kat,
        format!(
            "{k} {p} 264e5481eff42a4606abda06c0bfda3d\n{k} {p} 00000000000000000000000000000000\n",
            k = "80000000000000000000000000000000",
            p = "00000000000000000000000000000000",
        ),
    )
    .unwrap();
    let out = bin()
        .args(["verify", "--quick"])
        .arg("--kat-file")
        .arg(&kat)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("vector line 2"), "{text}");
    assert_eq!(stderr_line_count(&out), 1);
}

#[test]
fn keyschedule_network_matches_reference_output(){
    let a = run_ok(bin().args(["keyschedule", "--key", KEY128, "--design", "REF"]));
    let b = run_ok(bin().args(["keyschedule", "--key", KEY128, "--design", "KS2"]));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8_lossy(&a.stdout);
    assert_eq!(text.lines().count(), 33);
    assert!(text.starts_with("k[00] = "));
}

#[test]
fn keyschedule_rejects_mismatched_key_bits() {
    let out = bin()
        .args(["keyschedule", "--key", KEY128, "--key-bits", "256"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn list_designs_names_all_five() {
    let out = run_ok(bin().args(["list-designs"]));
    let text = String::from_utf8_lossy(&out.stdout);
    for d in ["KS1", "KS2", "ENC1", "ENC2", "ENC3"] {
        assert!(text.contains(d), "missing {d}: {text}");
    }
}

#[test]
fn kat_file_convention_note_is_present() {
    // The bundled KAT file documents its byte conventions where it lives.
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../serpent/kats/serpent_ecb.txt");
    let text = fs::read_to_string(path).unwrap();
    assert!(text.contains("key_hex plaintext_hex ciphertext_hex"));
}

#[test]
fn bench_kv_format_lists_every_field() {
    let out = run_ok(bin().args([
        "bench",
        "--design",
        "ENC2",
        "--blocks",
        "4",
        "--metrics-format",
        "kv",
    ]));
    let text = String::from_utf8_lossy(&out.stdout);
    for key in [
        "design=KS1+ENC2",
        "total_cycles=",
        "cycles_per_block=",
        "pipeline_fill_latency=",
        "process_count=",
        "channel_count=",
        "max_concurrent_active=",
    ] {
        assert!(text.contains(key), "missing {key} in {text}");
    }
}
