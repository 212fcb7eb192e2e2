//! The three encryption networks and their shared output-mixing tail.
//!
//! Every design is the same dataflow at different replication: 31 fold
//! rounds applied to each block, then key mixing with group 31, the S7
//! substitution, and key mixing with group 32. ENC1 replicates the fold 31
//! times (a full pipeline), ENC2 keeps a single fold process and replays
//! the subkey sequence per block, ENC3 splits the rounds between an
//! `n`-stage pipeline and one streamed fold.

use procnet::{broadcast_stream, item, producer, svfoldl_stream, szipwith, vvfoldl, Network,
    PairOf, PortSpec};

use super::{
    round_index_sequence, sv4, sw, v4, EncDesign, FeedRx, NetError, RunOptions, Sv4Rx, Sv4Tx,
    SwRx, SwTx, V4Rx, FOLD_ROUNDS,
};
use crate::cipher::{sbox, serpent_fold, Block, FOLD_OPS, SBOX_OPS};

fn quad(words: Vec<u32>) -> [u32; 4] {
    words.try_into().expect("4-word group")
}

/// Fold body for a pipelined stage: stage `i` keeps the broadcast index
/// sequence and its own subkey group, received once at startup.
fn pipelined_fold(i: usize, words: Vec<u32>, arg: &(Vec<u32>, Vec<u32>)) -> Vec<u32> {
    let index = arg.0[i] as usize;
    let keys = arg.1.as_slice().try_into().expect("4-word group");
    serpent_fold(Block(quad(words)), index, &keys).0.to_vec()
}

/// Fold body for the streamed stage: each retained argument carries its own
/// S-box index and subkey group.
fn streamed_fold(_step: usize, words: Vec<u32>, arg: &(u32, Vec<u32>)) -> Vec<u32> {
    let keys = arg.1.as_slice().try_into().expect("4-word group");
    serpent_fold(Block(quad(words)), arg.0 as usize, &keys)
        .0
        .to_vec()
}

/// Wire one encryption instance: subkeys from `feed`, plaintext blocks from
/// `blocks_in`, ciphertext blocks to `out_tx`.
pub(crate) fn build(
    net: &mut Network,
    base: &str,
    enc: EncDesign,
    feed: FeedRx,
    blocks_in: Sv4Rx,
    out_tx: Sv4Tx,
    opts: RunOptions,
) -> Result<(), NetError> {
    let pipelined = feed.pipelined.len();
    debug_assert_eq!(
        pipelined,
        match enc {
            EncDesign::Enc1 => FOLD_ROUNDS,
            EncDesign::Enc2 => 0,
            EncDesign::Enc3 { stages } => stages,
        },
        "feed ports must match the design"
    );
    let has_tail = pipelined < FOLD_ROUNDS;

    // Round indices are data: produce the cycled sequence once and fan it
    // out to every consumer (each pipelined stage, plus the streamed tail).
    let lanes = pipelined + usize::from(has_tail);
    let (idx_in_tx, idx_in_rx) = sw().open(net, &format!("{base}.indices"));
    producer(
        format!("{base}.idx_prd"),
        sw(),
        round_index_sequence(),
    )
    .instantiate(net, (), idx_in_tx);
    let mut lane_txs: Vec<SwTx> = Vec::with_capacity(lanes);
    let mut lane_rxs: Vec<SwRx> = Vec::with_capacity(lanes);
    for i in 0..lanes {
        let (tx, rx) = sw().open(net, &format!("{base}.indices[{i}]"));
        lane_txs.push(tx);
        lane_rxs.push(rx);
    }
    broadcast_stream(format!("{base}.idx_bc"), item::<u32>(), lanes)
        .instantiate(net, idx_in_rx, lane_txs);
    let tail_idx_rx = if has_tail { lane_rxs.pop() } else { None };

    // Pipelined part.
    let mut chain_rx = blocks_in;
    if pipelined > 0 {
        let args_rx: Vec<(SwRx, V4Rx)> = lane_rxs.into_iter().zip(feed.pipelined).collect();
        let (pipe_tx, pipe_rx) = sv4().open(net, &format!("{base}.pipe_out"));
        let stage = vvfoldl(
            pipelined,
            PairOf(sw(), v4()),
            v4(),
            format!("{base}.fold"),
            FOLD_OPS,
            pipelined_fold,
        )?;
        // Inter-stage channels act as pipeline registers.
        let saved = net.default_capacity();
        net.set_default_capacity(opts.pipeline_capacity);
        stage.instantiate(net, (args_rx, chain_rx), pipe_tx);
        net.set_default_capacity(saved);
        chain_rx = pipe_rx;
    }

    // Streamed part: zip the remaining indices with the streamed subkey
    // groups and fold every block through the retained sequence.
    if has_tail {
        let tail_lane = tail_idx_rx.expect("tail index lane");
        let (tail_tx, tail_rx) = sw().open(net, &format!("{base}.indices_tail"));
        {
            let stream = sw();
            let skip = pipelined;
            let name = format!("{base}.idx_tail");
            net.spawn(&name, move |p| {
                let mut seen = 0usize;
                while let Some(i) = stream.next(p, &tail_lane) {
                    if seen >= skip {
                        stream.send_elem(p, &tail_tx, i);
                    }
                    seen += 1;
                }
                stream.send_eot(p, &tail_tx);
            });
        }
        let arg_spec = PairOf(item::<u32>(), v4());
        let arg_stream = procnet::StreamOf::new(arg_spec.clone());
        let (zip_tx, zip_rx) = arg_stream.open(net, &format!("{base}.fold_args"));
        szipwith(
            format!("{base}.args_zip"),
            item::<u32>(),
            v4(),
            arg_spec.clone(),
            0,
            |i, g| (i, g),
        )
        .instantiate(
            net,
            (tail_rx, feed.streamed.expect("streamed subkeys")),
            zip_tx,
        );
        let name = if pipelined == 0 {
            format!("{base}.fold")
        } else {
            format!("{base}.fold_tail")
        };
        let (tail_out_tx, tail_out_rx) = sv4().open(net, &format!("{base}.tail_out"));
        svfoldl_stream(name, arg_spec, v4(), FOLD_OPS, streamed_fold)
            .instantiate(net, (zip_rx, chain_rx), tail_out_tx);
        chain_rx = tail_out_rx;
    }

    spawn_final_mix(net, base, feed.g31, feed.g32, chain_rx, out_tx);
    Ok(())
}

/// The output mixing: key-mix with group 31, S7, key-mix with group 32.
/// Each key mixing runs as four per-lane processes, so the block stream is
/// spread to per-lane word streams on entry and gathered on exit.
fn spawn_final_mix(
    net: &mut Network,
    base: &str,
    g31: V4Rx,
    g32: V4Rx,
    input: Sv4Rx,
    out_tx: Sv4Tx,
) {
    let lane_bundle = procnet::VectorOf::new(4, sw());
    let (a_tx, a_rx) = lane_bundle.open(net, &format!("{base}.mix_a"));
    let (b_tx, b_rx) = lane_bundle.open(net, &format!("{base}.mix_b"));
    let (c_tx, c_rx) = lane_bundle.open(net, &format!("{base}.mix_c"));
    let (d_tx, d_rx) = lane_bundle.open(net, &format!("{base}.mix_d"));

    {
        let blocks = sv4();
        let words = sw();
        let name = format!("{base}.mix_in");
        net.spawn(&name, move |p| {
            while let Some(block) = blocks.next(p, &input) {
                for (lane, w) in a_tx.iter().zip(block) {
                    words.send_elem(p, lane, w);
                }
            }
            for lane in &a_tx {
                words.send_eot(p, lane);
            }
        });
    }

    spawn_key_mix_lanes(net, &format!("{base}.key_mix1"), g31, a_rx, b_tx);

    {
        let words = sw();
        let name = format!("{base}.sbox_out");
        net.spawn(&name, move |p| loop {
            match words.next(p, &b_rx[0]) {
                Some(w0) => {
                    let w1 = p.recv(&b_rx[1].elems);
                    let w2 = p.recv(&b_rx[2].elems);
                    let w3 = p.recv(&b_rx[3].elems);
                    p.work(SBOX_OPS);
                    let out = sbox(7, Block([w0, w1, w2, w3]));
                    for (lane, w) in c_tx.iter().zip(out.0) {
                        words.send_elem(p, lane, w);
                    }
                }
                None => {
                    for lane in &b_rx[1..] {
                        let _ = p.recv(&lane.eot);
                    }
                    for lane in &c_tx {
                        words.send_eot(p, lane);
                    }
                    return;
                }
            }
        });
    }

    spawn_key_mix_lanes(net, &format!("{base}.key_mix2"), g32, c_rx, d_tx);

    {
        let blocks = sv4();
        let words = sw();
        let name = format!("{base}.mix_out");
        net.spawn(&name, move |p| loop {
            match words.next(p, &d_rx[0]) {
                Some(w0) => {
                    let w1 = p.recv(&d_rx[1].elems);
                    let w2 = p.recv(&d_rx[2].elems);
                    let w3 = p.recv(&d_rx[3].elems);
                    blocks.send_elem(p, &out_tx, vec![w0, w1, w2, w3]);
                }
                None => {
                    for lane in &d_rx[1..] {
                        let _ = p.recv(&lane.eot);
                    }
                    blocks.send_eot(p, &out_tx);
                    return;
                }
            }
        });
    }
}

/// Four concurrent XOR processes, one per word lane; each receives its key
/// word once and then transforms its lane's word stream.
fn spawn_key_mix_lanes(
    net: &mut Network,
    base: &str,
    keys: V4Rx,
    input: Vec<SwRx>,
    output: Vec<SwTx>,
) {
    for (lane, ((key_rx, in_rx), out_tx)) in
        keys.into_iter().zip(input).zip(output).enumerate()
    {
        let words = sw();
        let name = format!("{base}[{lane}]");
        net.spawn(&name, move |p| {
            let key = p.recv(&key_rx);
            while let Some(w) = words.next(p, &in_rx) {
                p.work(1);
                words.send_elem(p, &out_tx, w ^ key);
            }
            words.send_eot(p, &out_tx);
        });
    }
}
