//! Process-network designs of the cipher.
//!
//! Two key-schedule layouts and three encryption layouts, every combination
//! observationally equivalent to the sequential reference:
//!
//! * `KS1` — data-parallel: 32 concurrent S-box processes plus one trailing
//!   S3 transform the prekeys delivered as one wide vector.
//! * `KS2` — streamed: one bank of 8 S-box processes reused over a stream
//!   of prekey groups, trading replication for cycles.
//! * `ENC1` — fully pipelined: 31 round processes in a line, one per round.
//! * `ENC2` — streamed: a single round process folds every block through
//!   all 31 rounds, subkeys arriving as a stream.
//! * `ENC3(n)` — hybrid: `n` pipelined rounds followed by one streamed fold
//!   for the remaining `31 - n`.
//!
//! Round indices travel as data: a producer emits the cycled S-box index
//! sequence and a broadcast process fans it out to every round process.

mod bench;
mod encrypt;
mod keyschedule;

use std::fmt;
use std::sync::{Arc, Mutex};

use procnet::{
    item, Capacity, CostModel, Network, PortSpec, Receiver, RunError, RunMode, RunStats, Sender,
    ShapeError, StreamOf, StreamRx, StreamTx, VectorOf,
};
use thiserror::Error;

use crate::cipher::Block;
use crate::schedule::{Key256, SubKeySchedule, GROUP_COUNT};

pub use bench::{compare_designs, run_with_metrics, Comparison, ComparisonRow};
pub use keyschedule::run_keyschedule;

/// Rounds carried by the fold part of the encryption networks (the final
/// round is realized by the key-mix / S7 / key-mix tail).
pub const FOLD_ROUNDS: usize = 31;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KsDesign {
    /// Data-parallel key schedule (32 + 1 S-box processes).
    Ks1,
    /// Streamed key schedule (8 + 1 S-box processes).
    Ks2,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EncDesign {
    /// Fully pipelined: 31 round stages.
    Enc1,
    /// Streamed: one round stage folding all rounds per block.
    Enc2,
    /// Hybrid: `stages` pipelined rounds, the rest streamed.
    Enc3 { stages: usize },
}

/// One runnable encryption configuration: a key-schedule network feeding an
/// encryption network.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct NetworkDesign {
    pub ks: KsDesign,
    pub enc: EncDesign,
}

impl fmt::Display for KsDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KsDesign::Ks1 => write!(f, "KS1"),
            KsDesign::Ks2 => write!(f, "KS2"),
        }
    }
}

impl fmt::Display for EncDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncDesign::Enc1 => write!(f, "ENC1"),
            EncDesign::Enc2 => write!(f, "ENC2"),
            EncDesign::Enc3 { stages } => write!(f, "ENC3({stages})"),
        }
    }
}

impl fmt::Display for NetworkDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.ks, self.enc)
    }
}

impl NetworkDesign {
    pub fn new(ks: KsDesign, enc: EncDesign) -> NetworkDesign {
        NetworkDesign { ks, enc }
    }

    pub fn validate(&self) -> Result<(), NetError> {
        if let EncDesign::Enc3 { stages } = self.enc {
            if stages == 0 || stages > FOLD_ROUNDS {
                return Err(NetError::StagesOutOfRange(stages));
            }
        }
        Ok(())
    }
}

#[derive(Error, Debug)]
pub enum NetError {
    #[error("ENC3 stage count {0} out of range 1..=31 (use ENC2 for the all-streamed layout)")]
    StagesOutOfRange(usize),
    #[error("multiway lane count must be at least 1")]
    NoLanes,
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Run(#[from] RunError),
    #[error("network produced {got} ciphertext blocks, expected {expected}")]
    OutputCount { got: usize, expected: usize },
    #[error("ciphertext mismatch: {0}")]
    OutputMismatch(String),
}

/// Execution options for a network run.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub mode: RunMode,
    pub cost: CostModel,
    /// Buffering of the channels between pipeline stages; one-deep buffers
    /// model pipeline registers and let stages overlap.
    pub pipeline_capacity: Capacity,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            mode: RunMode::Stepped { seed: 0 },
            cost: CostModel::unit(),
            pipeline_capacity: Capacity::Buffered,
        }
    }
}

impl RunOptions {
    pub fn parallel() -> Self {
        RunOptions {
            mode: RunMode::Parallel,
            ..RunOptions::default()
        }
    }

    pub fn stepped(seed: u64) -> Self {
        RunOptions {
            mode: RunMode::Stepped { seed },
            ..RunOptions::default()
        }
    }
}

// Shared port spec shorthands.
pub(crate) type WordItem = procnet::Item<u32>;
pub(crate) type V4Spec = VectorOf<WordItem>;
pub(crate) type Sv4Spec = StreamOf<V4Spec>;
pub(crate) type SwSpec = StreamOf<WordItem>;

pub(crate) type V4Tx = Vec<Sender<u32>>;
pub(crate) type V4Rx = Vec<Receiver<u32>>;
pub(crate) type Sv4Tx = StreamTx<Vec<Sender<u32>>>;
pub(crate) type Sv4Rx = StreamRx<Vec<Receiver<u32>>>;
pub(crate) type SwTx = StreamTx<Sender<u32>>;
pub(crate) type SwRx = StreamRx<Receiver<u32>>;

pub(crate) fn v4() -> V4Spec {
    VectorOf::new(4, item::<u32>())
}

pub(crate) fn sv4() -> Sv4Spec {
    StreamOf::new(v4())
}

pub(crate) fn sw() -> SwSpec {
    StreamOf::new(item::<u32>())
}

/// The cycled S-box index sequence distributed to the round processes.
pub(crate) fn round_index_sequence() -> Vec<u32> {
    (0..FOLD_ROUNDS).map(|i| (i % 8) as u32).collect()
}

/// Receive side of a key-schedule network's output.
pub(crate) enum KsOutRx {
    /// Groups 0..31 as a 4x8 vector-of-vectors of word quads, group 32 on
    /// its own quad.
    Parallel { groups: Vec<Vec<V4Rx>>, last: V4Rx },
    /// Groups 0..31 streamed in order, group 32 on its own quad.
    Streamed { groups: Sv4Rx, last: V4Rx },
}

/// Subkey delivery ports for one encryption instance: groups `0..k` as
/// startup vectors for the pipelined stages, groups `k..31` streamed, and
/// the final two groups as vectors for the output mixing.
pub(crate) struct FeedTx {
    pub pipelined: Vec<V4Tx>,
    pub streamed: Option<Sv4Tx>,
    pub g31: V4Tx,
    pub g32: V4Tx,
}

pub(crate) struct FeedRx {
    pub pipelined: Vec<V4Rx>,
    pub streamed: Option<Sv4Rx>,
    pub g31: V4Rx,
    pub g32: V4Rx,
}

/// Open the subkey ports an `EncDesign` instance needs.
pub(crate) fn open_feed(net: &mut Network, base: &str, enc: EncDesign) -> (FeedTx, FeedRx) {
    let pipelined_count = match enc {
        EncDesign::Enc1 => FOLD_ROUNDS,
        EncDesign::Enc2 => 0,
        EncDesign::Enc3 { stages } => stages,
    };
    let mut pipe_tx = Vec::new();
    let mut pipe_rx = Vec::new();
    for i in 0..pipelined_count {
        let (tx, rx) = v4().open(net, &format!("{base}.keys[{i}]"));
        pipe_tx.push(tx);
        pipe_rx.push(rx);
    }
    let (streamed_tx, streamed_rx) = if pipelined_count < FOLD_ROUNDS {
        let (tx, rx) = sv4().open(net, &format!("{base}.keys_stream"));
        (Some(tx), Some(rx))
    } else {
        (None, None)
    };
    let (g31_tx, g31_rx) = v4().open(net, &format!("{base}.keys[31]"));
    let (g32_tx, g32_rx) = v4().open(net, &format!("{base}.keys[32]"));
    (
        FeedTx {
            pipelined: pipe_tx,
            streamed: streamed_tx,
            g31: g31_tx,
            g32: g32_tx,
        },
        FeedRx {
            pipelined: pipe_rx,
            streamed: streamed_rx,
            g31: g31_rx,
            g32: g32_rx,
        },
    )
}

pub(crate) type ScheduleSlot = Arc<Mutex<Option<SubKeySchedule>>>;

/// The schedule store: consumes a key-schedule network's output, retains the
/// whole schedule, and re-produces it in the form each encryption instance
/// requires.
pub(crate) fn spawn_schedule_hub(
    net: &mut Network,
    ks_out: KsOutRx,
    feeds: Vec<FeedTx>,
) -> ScheduleSlot {
    let slot: ScheduleSlot = Arc::new(Mutex::new(None));
    let out = Arc::clone(&slot);
    net.spawn("hub.store", move |p| {
        let quad = v4();
        let stream = sv4();
        let mut groups: Vec<[u32; 4]> = Vec::with_capacity(GROUP_COUNT);
        match ks_out {
            KsOutRx::Parallel {
                groups: nested,
                last,
            } => {
                for outer in &nested {
                    for lane in outer {
                        let words = quad.store(p, lane);
                        groups.push(words.try_into().expect("quad"));
                    }
                }
                let words = quad.store(p, &last);
                groups.push(words.try_into().expect("quad"));
            }
            KsOutRx::Streamed { groups: rx, last } => {
                while let Some(words) = stream.next(p, &rx) {
                    groups.push(words.try_into().expect("quad"));
                }
                let words = quad.store(p, &last);
                groups.push(words.try_into().expect("quad"));
            }
        }
        assert_eq!(groups.len(), GROUP_COUNT, "schedule group count");
        *out.lock().expect("hub slot") =
            Some(SubKeySchedule(groups.clone().try_into().expect("groups")));
        for feed in &feeds {
            let k = feed.pipelined.len();
            // The streamed groups go first: their consumer interleaves with
            // the index broadcast, which the pipelined stages also wait on
            // before they can accept their startup vectors.
            if let Some(stx) = &feed.streamed {
                for group in groups.iter().take(FOLD_ROUNDS).skip(k) {
                    stream.send_elem(p, stx, group.to_vec());
                }
                stream.send_eot(p, stx);
            }
            for (i, lanes) in feed.pipelined.iter().enumerate() {
                for (l, tx) in lanes.iter().enumerate() {
                    p.send(tx, groups[i][l]);
                }
            }
            for (l, tx) in feed.g31.iter().enumerate() {
                p.send(tx, groups[31][l]);
            }
            for (l, tx) in feed.g32.iter().enumerate() {
                p.send(tx, groups[32][l]);
            }
        }
    });
    slot
}

/// Result of running an encryption network.
pub struct EncRun {
    pub ciphertexts: Vec<Block>,
    pub stats: RunStats,
    /// Logical completion instant of each output block, in output order.
    pub completions: Vec<u64>,
}

/// Run one key-schedule network into one encryption network over a block
/// stream; equals the sequential `encrypt_blocks` on the same inputs.
pub fn serpent_encrypt_net(
    design: NetworkDesign,
    key: &Key256,
    blocks: &[Block],
    opts: RunOptions,
) -> Result<EncRun, NetError> {
    design.validate()?;
    let mut net = Network::with_cost(opts.cost);
    let ks_out = keyschedule::build(&mut net, design.ks, *key);
    let (feed_tx, feed_rx) = open_feed(&mut net, "enc", design.enc);
    spawn_schedule_hub(&mut net, ks_out, vec![feed_tx]);
    let (in_tx, in_rx) = sv4().open(&mut net, "enc.blocks_in");
    let (out_tx, out_rx) = sv4().open(&mut net, "enc.blocks_out");
    spawn_block_producer(&mut net, "prd_blocks", blocks, in_tx);
    encrypt::build(&mut net, "enc", design.enc, feed_rx, in_rx, out_tx, opts)?;
    let collected = spawn_block_collector(&mut net, "collect_blocks", out_rx);
    let stats = net.run(opts.mode)?;
    finish_run(collected, stats, blocks.len())
}

/// Distribute blocks round-robin over `lanes` concurrent encryption
/// instances and restore the output order.
pub fn serpent_encrypt_multiway(
    design: NetworkDesign,
    key: &Key256,
    blocks: &[Block],
    lanes: usize,
    opts: RunOptions,
) -> Result<EncRun, NetError> {
    design.validate()?;
    if lanes == 0 {
        return Err(NetError::NoLanes);
    }
    let mut net = Network::with_cost(opts.cost);
    let ks_out = keyschedule::build(&mut net, design.ks, *key);
    let mut feed_txs = Vec::new();
    let mut feed_rxs = Vec::new();
    for j in 0..lanes {
        let (tx, rx) = open_feed(&mut net, &format!("enc[{j}]"), design.enc);
        feed_txs.push(tx);
        feed_rxs.push(rx);
    }
    spawn_schedule_hub(&mut net, ks_out, feed_txs);

    let (in_tx, in_rx) = sv4().open(&mut net, "blocks_in");
    spawn_block_producer(&mut net, "prd_blocks", blocks, in_tx);
    let lane_spec = VectorOf::new(lanes, sv4());
    let (lanes_in_tx, lanes_in_rx) = lane_spec.open(&mut net, "lane_in");
    procnet::deal("deal_blocks", v4(), lanes).instantiate(&mut net, in_rx, lanes_in_tx);
    let (lanes_out_tx, lanes_out_rx) = lane_spec.open(&mut net, "lane_out");
    for (j, ((feed_rx, lane_rx), lane_tx)) in feed_rxs
        .into_iter()
        .zip(lanes_in_rx)
        .zip(lanes_out_tx)
        .enumerate()
    {
        encrypt::build(
            &mut net,
            &format!("enc[{j}]"),
            design.enc,
            feed_rx,
            lane_rx,
            lane_tx,
            opts,
        )?;
    }
    let (merged_tx, merged_rx) = sv4().open(&mut net, "blocks_out");
    procnet::collect_rr("merge_blocks", v4(), lanes).instantiate(&mut net, lanes_out_rx, merged_tx);
    let collected = spawn_block_collector(&mut net, "collect_blocks", merged_rx);
    let stats = net.run(opts.mode)?;
    finish_run(collected, stats, blocks.len())
}

type Collected = Arc<Mutex<Vec<(Vec<u32>, u64)>>>;

pub(crate) fn spawn_block_producer(net: &mut Network, name: &str, blocks: &[Block], tx: Sv4Tx) {
    let values: Vec<Vec<u32>> = blocks.iter().map(|b| b.0.to_vec()).collect();
    let spec = sv4();
    net.spawn(name, move |p| {
        spec.produce(p, &tx, values);
    });
}

pub(crate) fn spawn_block_collector(net: &mut Network, name: &str, rx: Sv4Rx) -> Collected {
    let collected: Collected = Arc::new(Mutex::new(Vec::new()));
    let sink = Arc::clone(&collected);
    let spec = sv4();
    net.spawn(name, move |p| {
        while let Some(words) = spec.next(p, &rx) {
            let t = p.clock();
            sink.lock().expect("collector lock").push((words, t));
        }
    });
    collected
}

fn finish_run(collected: Collected, stats: RunStats, expected: usize) -> Result<EncRun, NetError> {
    let got = std::mem::take(&mut *collected.lock().expect("collector lock"));
    if got.len() != expected {
        return Err(NetError::OutputCount {
            got: got.len(),
            expected,
        });
    }
    let mut ciphertexts = Vec::with_capacity(got.len());
    let mut completions = Vec::with_capacity(got.len());
    for (words, t) in got {
        ciphertexts.push(Block(words.try_into().expect("4-word block")));
        completions.push(t);
    }
    Ok(EncRun {
        ciphertexts,
        stats,
        completions,
    })
}
