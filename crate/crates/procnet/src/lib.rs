//! Process networks built from synchronous message-passing channels.
//!
//! The building blocks mirror the classic trio of communication refinements:
//! an *item* travels on a single channel, a *stream* is a sequence of items
//! followed by an end-of-transmission signal on a dedicated channel, and a
//! *vector* is a bundle of `n` channels that each communicate once per
//! transfer. Ports compose recursively (streams of vectors, vectors of
//! streams, ...).
//!
//! Processes are plain closures that talk to the world only through their
//! port endpoints. A [`Network`] collects channels and processes, then runs
//! them either on free-running threads or under a deterministic stepped
//! scheduler that accounts logical cycles per rendezvous and per primitive
//! operation. Deadlock is detected by quiescence, never by timeout.
//!
//! Higher-order skeletons (`smap`, `vmap`, `szipwith`, `vzipwith`,
//! `vmapwith`, `vvfoldl`, `svfoldl`) assemble the common map/zip/fold
//! networks from stage functions.

pub mod cost;
pub mod metrics;
pub mod port;
pub mod process;
pub mod runtime;
pub mod shape;
pub mod skeletons;

pub use cost::CostModel;
pub use metrics::MetricsReport;
pub use port::{item, Item, Nil, PairOf, PortSpec, StreamOf, StreamRx, StreamTx, VectorOf};
pub use process::{
    broadcast_stream, collect_rr, deal, feed, producer, relay, sink, storer, Stage, StoreHandle,
};
pub use runtime::{
    Capacity, ChanId, Network, Proc, ProcId, Receiver, RunError, RunMode, RunStats, Sender,
};
pub use shape::{Shape, ShapeError};
pub use skeletons::{smap, svfoldl, svfoldl_stream, szipwith, vmap, vmapwith, vvfoldl, vzipwith};
