//! Acceptance suite: one test per acceptance criterion, each printing a
//! PASS/FAIL line (visible with `--nocapture`).
//!
//! Run with: `cargo test -p serpent --test acceptance -- --nocapture`

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use procnet::{
    item, producer, smap, storer, svfoldl, szipwith, vmap, vvfoldl, vzipwith, Capacity, CostModel,
    Network, PairOf, PortSpec, RunMode, Stage, StreamOf, VectorOf,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serpent::cipher::{decrypt_block, encrypt_block, encrypt_blocks, Block};
use serpent::kat::{bundled_vectors, run_kat_suite};
use serpent::networks::{
    run_keyschedule, run_with_metrics, serpent_encrypt_multiway, serpent_encrypt_net, EncDesign,
    KsDesign, NetworkDesign, RunOptions,
};
use serpent::schedule::{key_schedule, Key256};
use serpent::tables::SERPENT_SBOXES;

fn criterion(name: &str, f: impl FnOnce()) {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f));
    let elapsed = start.elapsed();
    match &result {
        Ok(()) => println!("ACCEPTANCE {name}: PASS ({elapsed:.2?})"),
        Err(_) => println!("ACCEPTANCE {name}: FAIL ({elapsed:.2?})"),
    }
    if let Err(e) = result {
        resume_unwind(e);
    }
}

fn random_key(rng: &mut StdRng) -> Key256 {
    let len = [16usize, 24, 32][rng.gen_range(0..3)];
    let bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
    Key256::from_bytes(&bytes).unwrap()
}

fn random_blocks(rng: &mut StdRng, n: usize) -> Vec<Block> {
    (0..n)
        .map(|_| Block([rng.gen(), rng.gen(), rng.gen(), rng.gen()]))
        .collect()
}

/// KAT conformance: standard-mode encrypt/decrypt matches published
/// known-answer vectors covering 128/192/256-bit keys, bit-exact, under 1s.
#[test]
fn acceptance_kat_conformance() {
    criterion("kat-conformance", || {
        let start = Instant::now();
        let vectors = bundled_vectors();
        assert!(vectors.len() >= 4, "need at least 4 vectors");
        for bits in [128usize, 192, 256] {
            assert!(
                vectors.iter().any(|v| v.key_bits() == bits),
                "no vector with {bits}-bit key"
            );
        }
        let failures = run_kat_suite(&vectors);
        assert!(
            failures.is_empty(),
            "{}",
            failures
                .iter()
                .map(|f| f.to_string())
                .collect::<Vec<_>>()
                .join("\n")
        );
        assert!(
            start.elapsed() < Duration::from_secs(1),
            "KAT suite exceeded 1s: {:?}",
            start.elapsed()
        );
    });
}

/// Inverse law: decrypt(encrypt(b)) == b for 1000 random (key, block)
/// pairs, exact, under 10s.
#[test]
fn acceptance_inverse_law() {
    criterion("inverse-law", || {
        let start = Instant::now();
        let mut rng = StdRng::seed_from_u64(0xacce);
        for i in 0..1000 {
            let key = random_key(&mut rng);
            let ks = key_schedule(&key);
            let b = Block([rng.gen(), rng.gen(), rng.gen(), rng.gen()]);
            assert_eq!(decrypt_block(&ks, encrypt_block(&ks, b)), b, "pair {i}");
        }
        assert!(
            start.elapsed() < Duration::from_secs(10),
            "inverse law exceeded 10s: {:?}",
            start.elapsed()
        );
    });
}

/// Refinement equivalence: every KS x ENC combination produces ciphertexts
/// identical to the pure reference on 100 random blocks, under 2 minutes.
/// The same instrumented runs feed the stream-protocol criterion.
#[test]
fn acceptance_refinement_equivalence_and_protocol() {
    criterion("refinement-equivalence", || {
        let start = Instant::now();
        let mut rng = StdRng::seed_from_u64(0x5e7);
        let mut protocol_checked = 0usize;
        for ks in [KsDesign::Ks1, KsDesign::Ks2] {
            for enc in [
                EncDesign::Enc1,
                EncDesign::Enc2,
                EncDesign::Enc3 { stages: 1 },
                EncDesign::Enc3 { stages: 2 },
                EncDesign::Enc3 { stages: 5 },
                EncDesign::Enc3 { stages: 31 },
            ] {
                let design = NetworkDesign::new(ks, enc);
                let key = random_key(&mut rng);
                let blocks = random_blocks(&mut rng, 100);
                let expect = encrypt_blocks(&key_schedule(&key), &blocks);
                let run = serpent_encrypt_net(design, &key, &blocks, RunOptions::default())
                    .unwrap_or_else(|e| panic!("{design}: {e}"));
                assert_eq!(run.ciphertexts, expect, "{design} diverged from reference");
                assert!(
                    run.stats.stream_protocol_ok(),
                    "{design}: {:?}",
                    run.stats.violations
                );
                protocol_checked += 1;
            }
        }
        assert_eq!(protocol_checked, 12);
        assert!(
            start.elapsed() < Duration::from_secs(120),
            "equivalence matrix exceeded 2min: {:?}",
            start.elapsed()
        );
    });
}

/// Skeleton laws: each skeleton matches its sequential higher-order-function
/// oracle on at least 200 randomized instances with lengths 0..256.
#[test]
fn acceptance_skeleton_laws() {
    criterion("skeleton-laws", || {
        let mut rng = StdRng::seed_from_u64(0x51ce);

        // smap == map
        for case in 0..200 {
            let len = rng.gen_range(0..=256);
            let values: Vec<u64> = (0..len).map(|_| rng.gen()).collect();
            let mul: u64 = rng.gen_range(1..=9);
            let expect: Vec<u64> = values.iter().map(|x| x.wrapping_mul(mul) ^ 3).collect();
            let spec = StreamOf::new(item::<u64>());
            let mut net = Network::new();
            let (in_tx, in_rx) = spec.open(&mut net, "in");
            let (out_tx, out_rx) = spec.open(&mut net, "out");
            producer("p", spec.clone(), values).instantiate(&mut net, (), in_tx);
            smap("m", item::<u64>(), item::<u64>(), 1, move |x: u64| {
                x.wrapping_mul(mul) ^ 3
            })
            .instantiate(&mut net, in_rx, out_tx);
            let (st, got) = storer("s", spec.clone());
            st.instantiate(&mut net, out_rx, ());
            net.run(RunMode::Parallel).unwrap();
            let got = got.take().unwrap();
            assert_eq!(got.len(), expect.len(), "smap case {case} length");
            assert_eq!(got, expect, "smap case {case}");
        }

        // vmap == elementwise map
        for case in 0..200 {
            let n = rng.gen_range(1..=16);
            let values: Vec<u64> = (0..n).map(|_| rng.gen()).collect();
            let add: u64 = rng.gen();
            let expect: Vec<u64> = values.iter().map(|x| x.wrapping_add(add)).collect();
            let spec = VectorOf::new(n, item::<u64>());
            let mut net = Network::new();
            let (in_tx, in_rx) = spec.open(&mut net, "in");
            let (out_tx, out_rx) = spec.open(&mut net, "out");
            producer("p", spec.clone(), values).instantiate(&mut net, (), in_tx);
            vmap(n, |i| {
                Stage::from_fn(format!("f[{i}]"), item::<u64>(), item::<u64>(), 1, move |v: u64| {
                    v.wrapping_add(add)
                })
            })
            .unwrap()
            .instantiate(&mut net, in_rx, out_tx);
            let (st, got) = storer("s", spec.clone());
            st.instantiate(&mut net, out_rx, ());
            net.run(RunMode::Parallel).unwrap();
            assert_eq!(got.take().unwrap(), expect, "vmap case {case}");
        }

        // szipwith == zipWith
        for case in 0..200 {
            let len = rng.gen_range(0..=256);
            let a: Vec<u64> = (0..len).map(|_| rng.gen()).collect();
            let b: Vec<u64> = (0..len).map(|_| rng.gen()).collect();
            let use_add = case % 2 == 0;
            let expect: Vec<u64> = a
                .iter()
                .zip(&b)
                .map(|(x, y)| if use_add { x.wrapping_add(*y) } else { x ^ y })
                .collect();
            let spec = StreamOf::new(item::<u64>());
            let mut net = Network::new();
            let (atx, arx) = spec.open(&mut net, "a");
            let (btx, brx) = spec.open(&mut net, "b");
            let (otx, orx) = spec.open(&mut net, "o");
            producer("pa", spec.clone(), a).instantiate(&mut net, (), atx);
            producer("pb", spec.clone(), b).instantiate(&mut net, (), btx);
            szipwith("z", item::<u64>(), item::<u64>(), item::<u64>(), 1, move |x, y| {
                if use_add {
                    x.wrapping_add(y)
                } else {
                    x ^ y
                }
            })
            .instantiate(&mut net, (arx, brx), otx);
            let (st, got) = storer("s", spec.clone());
            st.instantiate(&mut net, orx, ());
            net.run(RunMode::Parallel).unwrap();
            assert_eq!(got.take().unwrap(), expect, "szipwith case {case}");
        }

        // vzipwith == elementwise zip
        for case in 0..200 {
            let n = rng.gen_range(1..=16);
            let a: Vec<u64> = (0..n).map(|_| rng.gen()).collect();
            let b: Vec<u64> = (0..n).map(|_| rng.gen()).collect();
            let expect: Vec<u64> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
            let spec = VectorOf::new(n, item::<u64>());
            let mut net = Network::new();
            let (atx, arx) = spec.open(&mut net, "a");
            let (btx, brx) = spec.open(&mut net, "b");
            let (otx, orx) = spec.open(&mut net, "o");
            producer("pa", spec.clone(), a).instantiate(&mut net, (), atx);
            producer("pb", spec.clone(), b).instantiate(&mut net, (), btx);
            vzipwith(n, |i| {
                Stage::from_fn(
                    format!("z[{i}]"),
                    PairOf(item::<u64>(), item::<u64>()),
                    item::<u64>(),
                    1,
                    |(x, y): (u64, u64)| x ^ y,
                )
            })
            .unwrap()
            .instantiate(&mut net, (arx, brx), otx);
            let (st, got) = storer("s", spec.clone());
            st.instantiate(&mut net, orx, ());
            net.run(RunMode::Parallel).unwrap();
            assert_eq!(got.take().unwrap(), expect, "vzipwith case {case}");
        }

        // vvfoldl == svfoldl == sequential foldl
        for case in 0..200 {
            let k = rng.gen_range(1..=8);
            let args: Vec<u64> = (0..k).map(|_| rng.gen()).collect();
            let init: u64 = rng.gen();
            let use_add = case % 2 == 0;
            let oracle = args.iter().fold(init, |acc, a| {
                if use_add {
                    acc.wrapping_add(*a)
                } else {
                    acc ^ a
                }
            });

            // Pipelined fold.
            let acc_stream = StreamOf::new(item::<u64>());
            let args_spec = VectorOf::new(k, item::<u64>());
            let mut net = Network::new();
            let (args_tx, args_rx) = args_spec.open(&mut net, "args");
            let (acc_tx, acc_rx) = acc_stream.open(&mut net, "acc");
            let (out_tx, out_rx) = acc_stream.open(&mut net, "out");
            producer("pa", args_spec.clone(), args.clone()).instantiate(&mut net, (), args_tx);
            producer("pv", acc_stream.clone(), vec![init]).instantiate(&mut net, (), acc_tx);
            vvfoldl(k, item::<u64>(), item::<u64>(), "fold", 1, move |_, acc, a: &u64| {
                if use_add {
                    acc.wrapping_add(*a)
                } else {
                    acc ^ *a
                }
            })
            .unwrap()
            .instantiate(&mut net, (args_rx, acc_rx), out_tx);
            let (st, got) = storer("s", acc_stream.clone());
            st.instantiate(&mut net, out_rx, ());
            net.run(RunMode::Parallel).unwrap();
            assert_eq!(got.take().unwrap(), vec![oracle], "vvfoldl case {case}");

            // Streamed fold.
            let arg_stream = StreamOf::new(item::<u64>());
            let mut net = Network::new();
            let (init_tx, init_rx) = item::<u64>().open(&mut net, "init");
            let (args_tx, args_rx) = arg_stream.open(&mut net, "args");
            let (out_tx, out_rx) = item::<u64>().open(&mut net, "out");
            producer("pi", item::<u64>(), init).instantiate(&mut net, (), init_tx);
            producer("pa", arg_stream.clone(), args).instantiate(&mut net, (), args_tx);
            svfoldl("fold", item::<u64>(), item::<u64>(), 1, move |_, acc, a| {
                if use_add {
                    acc.wrapping_add(a)
                } else {
                    acc ^ a
                }
            })
            .instantiate(&mut net, (init_rx, args_rx), out_tx);
            let (st, got) = storer("s", item::<u64>());
            st.instantiate(&mut net, out_rx, ());
            net.run(RunMode::Parallel).unwrap();
            assert_eq!(got.take(), Some(oracle), "svfoldl case {case}");
        }
    });
}

/// S-box integrity: all eight S-boxes and inverses are nibble bijections and
/// mutual inverses; the S0 table brute-forced from its boolean dataflow
/// matches the table the reference uses.
#[test]
fn acceptance_sbox_integrity() {
    criterion("sbox-integrity", || {
        for i in 0..8 {
            let mut seen_fwd = [false; 16];
            let mut seen_inv = [false; 16];
            for x in 0..16usize {
                let y = SERPENT_SBOXES.s[i][x] as usize;
                let z = SERPENT_SBOXES.inv[i][x] as usize;
                assert!(!seen_fwd[y], "S{i} not injective");
                assert!(!seen_inv[z], "InvS{i} not injective");
                seen_fwd[y] = true;
                seen_inv[z] = true;
                assert_eq!(SERPENT_SBOXES.inv[i][y], x as u8, "S{i} inverse law");
                assert_eq!(SERPENT_SBOXES.s[i][z], x as u8, "InvS{i} inverse law");
            }
        }
        // Brute-force S0 from its boolean gate listing: a is the low input
        // bit, w the low output bit.
        let mut table = [0u8; 16];
        for v in 0..16u8 {
            let (a, b, c, d) = (v & 1 != 0, v & 2 != 0, v & 4 != 0, v & 8 != 0);
            let t02 = a | d;
            let t01 = b ^ c;
            let z = t02 ^ t01;
            let t05 = c | z;
            let t08 = d & t05;
            let t03 = a ^ b;
            let t07 = b | c;
            let t09 = t03 & t07;
            let y = t09 ^ t08;
            let t11 = t09 & y;
            let t13 = t07 ^ t11;
            let t06 = a ^ d;
            let t15 = t06 ^ t13;
            let w = !t15;
            let t14 = b & t06;
            let t17 = w ^ t14;
            let t12 = c ^ d;
            let x = t12 ^ t17;
            table[v as usize] = (w as u8) | ((x as u8) << 1) | ((y as u8) << 2) | ((z as u8) << 3);
        }
        assert_eq!(table, SERPENT_SBOXES.s[0], "S0 boolean circuit disagrees");
    });
}

/// Stream protocol and termination across design families not already
/// covered by the equivalence matrix: standalone key schedules, multiway
/// distribution, and repeated runs — zero deadlocks, every stream exactly
/// one EOT.
#[test]
fn acceptance_stream_protocol_and_termination() {
    criterion("stream-protocol-termination", || {
        let mut rng = StdRng::seed_from_u64(0xeaf);
        for ks in [KsDesign::Ks1, KsDesign::Ks2] {
            let key = random_key(&mut rng);
            let (_, stats) = run_keyschedule(ks, &key, RunOptions::default()).unwrap();
            assert!(stats.stream_protocol_ok(), "{ks}: {:?}", stats.violations);
        }
        let key = random_key(&mut rng);
        let blocks = random_blocks(&mut rng, 16);
        let design = NetworkDesign::new(KsDesign::Ks2, EncDesign::Enc3 { stages: 2 });
        let run =
            serpent_encrypt_multiway(design, &key, &blocks, 3, RunOptions::default()).unwrap();
        assert!(run.stats.stream_protocol_ok(), "{:?}", run.stats.violations);
        // Repeated parallel runs stay quiescent and deterministic.
        for _ in 0..3 {
            let run2 =
                serpent_encrypt_net(design, &key, &blocks, RunOptions::parallel()).unwrap();
            assert_eq!(run2.ciphertexts, run.ciphertexts);
            assert!(run2.stats.stream_protocol_ok());
        }
    });
}

/// Throughput ordering on a 32-block run: steady-state cycles per block
/// satisfies ENC1 <= ENC3(2) <= ENC2, ENC3(n) is non-increasing for
/// n = 1..8, and the reports are run-to-run deterministic.
#[test]
fn acceptance_throughput_ordering() {
    criterion("throughput-ordering", || {
        let mut rng = StdRng::seed_from_u64(0x7410);
        let key = random_key(&mut rng);
        let blocks = random_blocks(&mut rng, 32);
        let cost = CostModel::unit();

        let mut cpb = Vec::new();
        for enc in [
            EncDesign::Enc1,
            EncDesign::Enc3 { stages: 2 },
            EncDesign::Enc2,
        ] {
            let design = NetworkDesign::new(KsDesign::Ks1, enc);
            let (_, report) = run_with_metrics(design, &key, &blocks, cost, 0).unwrap();
            // Sanity on the report invariant.
            assert!(
                report.total_cycles as f64 >= report.cycles_per_block * blocks.len() as f64,
                "{enc}: total {} < cpb {} x {}",
                report.total_cycles,
                report.cycles_per_block,
                blocks.len()
            );
            cpb.push(report.cycles_per_block);
        }
        assert!(
            cpb[0] <= cpb[1] && cpb[1] <= cpb[2],
            "ordering violated: ENC1={} ENC3(2)={} ENC2={}",
            cpb[0],
            cpb[1],
            cpb[2]
        );

        let mut last = f64::INFINITY;
        for stages in 1..=8 {
            let design = NetworkDesign::new(KsDesign::Ks1, EncDesign::Enc3 { stages });
            let (_, report) = run_with_metrics(design, &key, &blocks, cost, 0).unwrap();
            assert!(
                report.cycles_per_block <= last,
                "ENC3({stages}) rose: {} > {last}",
                report.cycles_per_block
            );
            last = report.cycles_per_block;
        }

        // Determinism: same design, different scheduler seeds.
        let design = NetworkDesign::new(KsDesign::Ks1, EncDesign::Enc3 { stages: 2 });
        let (_, r0) = run_with_metrics(design, &key, &blocks, cost, 0).unwrap();
        let (_, r1) = run_with_metrics(design, &key, &blocks, cost, 4242).unwrap();
        assert_eq!(r0, r1, "metrics differ across scheduler seeds");
    });
}

/// Pipelining evidence: ENC1 with at least 4 in-flight blocks shows two or
/// more fold stages busy in the same simulated cycle.
#[test]
fn acceptance_pipelining_evidence() {
    criterion("pipelining-evidence", || {
        let mut rng = StdRng::seed_from_u64(0x9199);
        let key = random_key(&mut rng);
        let blocks = random_blocks(&mut rng, 8);
        let design = NetworkDesign::new(KsDesign::Ks1, EncDesign::Enc1);
        let opts = RunOptions {
            pipeline_capacity: Capacity::Buffered,
            ..RunOptions::default()
        };
        let run = serpent_encrypt_net(design, &key, &blocks, opts).unwrap();
        let overlap = run
            .stats
            .max_concurrent_matching(|n| n.starts_with("enc.fold["));
        assert!(
            overlap >= 2,
            "expected >=2 fold stages in the same cycle, saw {overlap}"
        );
    });
}
