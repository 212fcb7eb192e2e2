//! The two key-schedule networks.
//!
//! Both share the front: a producer hands the private key to a segmentation
//! process, which feeds the eight key words to the prekey generator. They
//! differ in how the 33 S-box applications are laid out: KS1 instantiates
//! one process per prekey group (32 in a 4x8 grid, plus the trailing S3),
//! KS2 reuses a bank of 8 processes over a stream of groups.

use procnet::{collect_rr, deal, item, producer, smap, vmap, vmapwith, Network, PortSpec, Stage};

use super::{sv4, v4, KsDesign, KsOutRx, NetError, RunOptions, V4Spec};
use crate::cipher::{sbox, Block, SBOX_OPS};
use crate::schedule::{
    generate_prekeys, sbox_index_for_group, segs, Key256, SubKeySchedule,
};

/// Primitive-op estimate for one prekey recurrence step (four XORs, the
/// round-constant XOR and the rotation).
const PREKEY_STEP_OPS: u64 = 6;

fn sbox_group_stage(name: String, group: usize) -> Stage<V4Spec, V4Spec> {
    let index = sbox_index_for_group(group);
    Stage::from_fn(name, v4(), v4(), SBOX_OPS, move |words| {
        sbox(index, Block(words.try_into().expect("quad"))).0.to_vec()
    })
}

/// Wire the chosen key-schedule design into `net`; the returned ports carry
/// the finished subkeys.
pub(crate) fn build(net: &mut Network, design: KsDesign, key: Key256) -> KsOutRx {
    let key_spec = item::<Key256>();
    let (key_tx, key_rx) = key_spec.open(net, "ks.key");
    producer("ks.key_prd", key_spec, key).instantiate(net, (), key_tx);

    let v8 = procnet::VectorOf::new(8, item::<u32>());
    let (seg_tx, seg_rx) = v8.open(net, "ks.segments");
    {
        let v8 = v8.clone();
        net.spawn("ks.segs", move |p| {
            let key = p.recv(&key_rx);
            let words = segs(32, &key).expect("32-bit segmentation");
            p.work(8);
            v8.produce(p, &seg_tx, words);
        });
    }

    match design {
        KsDesign::Ks1 => {
            // Prekeys leave as one wide vector: 4 x 8 groups plus the final
            // group on its own port.
            let nested = procnet::VectorOf::new(4, procnet::VectorOf::new(8, v4()));
            let (pre_tx, pre_rx) = nested.open(net, "ks.prekeys");
            let (last_pre_tx, last_pre_rx) = v4().open(net, "ks.prekeys_last");
            {
                let nested = nested.clone();
                net.spawn("ks.genws", move |p| {
                    let words = v8.store(p, &seg_rx);
                    let key = Key256::from_words(words.try_into().expect("8 words"));
                    let pre = generate_prekeys(&key);
                    p.work(132 * PREKEY_STEP_OPS);
                    let value: Vec<Vec<Vec<u32>>> = (0..4)
                        .map(|outer| {
                            (0..8)
                                .map(|inner| {
                                    let g = 8 * outer + inner;
                                    pre.0[4 * g..4 * g + 4].to_vec()
                                })
                                .collect()
                        })
                        .collect();
                    nested.produce(p, &pre_tx, value);
                    v4().produce(p, &last_pre_tx, pre.0[128..].to_vec());
                });
            }
            let (out_tx, out_rx) = nested.open(net, "ks.subkeys");
            let (last_out_tx, last_out_rx) = v4().open(net, "ks.subkeys_last");
            let grid = vmap(4, |outer| {
                vmapwith(
                    (0..8)
                        .map(|inner| {
                            let g = 8 * outer + inner;
                            sbox_group_stage(format!("ks.sbox[{g}]"), g)
                        })
                        .collect(),
                )
                .expect("uniform S-box stages")
            })
            .expect("uniform S-box rows");
            grid.instantiate(net, pre_rx, out_tx);
            sbox_group_stage("ks.sbox_last".into(), 32).instantiate(net, last_pre_rx, last_out_tx);
            KsOutRx::Parallel {
                groups: out_rx,
                last: last_out_rx,
            }
        }
        KsDesign::Ks2 => {
            // Prekeys leave as a stream of 32 groups; one S-box bank of 8
            // processes is reused over it, dealt round-robin so lane j
            // always applies the same S-box.
            let (pre_tx, pre_rx) = sv4().open(net, "ks.prekeys");
            let (last_pre_tx, last_pre_rx) = v4().open(net, "ks.prekeys_last");
            {
                let stream = sv4();
                net.spawn("ks.genws", move |p| {
                    let words = v8.store(p, &seg_rx);
                    let key = Key256::from_words(words.try_into().expect("8 words"));
                    let pre = generate_prekeys(&key);
                    p.work(132 * PREKEY_STEP_OPS);
                    for g in 0..32 {
                        stream.send_elem(p, &pre_tx, pre.0[4 * g..4 * g + 4].to_vec());
                    }
                    stream.send_eot(p, &pre_tx);
                    v4().produce(p, &last_pre_tx, pre.0[128..].to_vec());
                });
            }
            let lane_spec = procnet::VectorOf::new(8, sv4());
            let (lanes_tx, lanes_rx) = lane_spec.open(net, "ks.lanes");
            deal("ks.deal", v4(), 8).instantiate(net, pre_rx, lanes_tx);
            let (done_tx, done_rx) = lane_spec.open(net, "ks.lanes_done");
            let bank = vmapwith(
                (0..8)
                    .map(|lane| {
                        let index = sbox_index_for_group(lane);
                        smap(
                            format!("ks.sbox_lane[{lane}]"),
                            v4(),
                            v4(),
                            SBOX_OPS,
                            move |words: Vec<u32>| {
                                sbox(index, Block(words.try_into().expect("quad")))
                                    .0
                                    .to_vec()
                            },
                        )
                    })
                    .collect(),
            )
            .expect("uniform S-box lanes");
            bank.instantiate(net, lanes_rx, done_tx);
            let (out_tx, out_rx) = sv4().open(net, "ks.subkeys");
            collect_rr("ks.collect", v4(), 8).instantiate(net, done_rx, out_tx);

            let (last_out_tx, last_out_rx) = v4().open(net, "ks.subkeys_last");
            sbox_group_stage("ks.sbox_last".into(), 32)
                .instantiate(net, last_pre_rx, last_out_tx);
            KsOutRx::Streamed {
                groups: out_rx,
                last: last_out_rx,
            }
        }
    }
}

/// Run a key-schedule network on its own and return the schedule it stored
/// along with the run statistics.
pub fn run_keyschedule(
    design: KsDesign,
    key: &Key256,
    opts: RunOptions,
) -> Result<(SubKeySchedule, procnet::RunStats), NetError> {
    let mut net = Network::with_cost(opts.cost);
    let ks_out = build(&mut net, design, *key);
    let slot = super::spawn_schedule_hub(&mut net, ks_out, Vec::new());
    let stats = net.run(opts.mode)?;
    let schedule = slot
        .lock()
        .expect("hub slot")
        .take()
        .expect("schedule stored");
    Ok((schedule, stats))
}
