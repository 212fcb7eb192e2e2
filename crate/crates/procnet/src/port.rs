//! Port bundles: the communication refinements of items, streams and
//! vectors, composable to any nesting depth.
//!
//! A [`PortSpec`] value describes the channel structure of one port and how
//! to move a whole value across it. `produce`/`store` are the one-shot
//! producer and storer bodies; stream consumers usually iterate with
//! [`StreamOf::next`] instead of storing the whole list.

use std::marker::PhantomData;

use crate::runtime::{Capacity, ChanId, Network, Proc, Receiver, Sender};
use crate::shape::Shape;

pub trait PortSpec: Clone + Send + Sync + 'static {
    /// The abstract value carried by one whole transfer.
    type Value: Send + 'static;
    type Tx: Send + 'static;
    type Rx: Send + 'static;

    fn shape(&self) -> Shape;

    fn open_with(&self, net: &mut Network, name: &str, cap: Capacity) -> (Self::Tx, Self::Rx);

    fn open(&self, net: &mut Network, name: &str) -> (Self::Tx, Self::Rx) {
        let cap = net.default_capacity();
        self.open_with(net, name, cap)
    }

    /// Send one whole value over the bundle.
    fn produce(&self, p: &mut Proc, tx: &Self::Tx, value: Self::Value);

    /// Receive one whole value from the bundle.
    fn store(&self, p: &mut Proc, rx: &Self::Rx) -> Self::Value;

    /// Check that a value fits the bundle (vector lengths, recursively).
    fn check_value(&self, value: &Self::Value) -> Result<(), Shape> {
        let _ = value;
        Ok(())
    }

    /// Channels a consumer can watch to detect the start of the next
    /// transfer.
    fn probes(&self, rx: &Self::Rx, out: &mut Vec<ChanId>);

    /// Every leaf channel on the receive side of the bundle.
    fn leaves(&self, rx: &Self::Rx, out: &mut Vec<ChanId>);
}

/// A single channel carrying one `T` per transfer.
pub struct Item<T>(PhantomData<fn() -> T>);

impl<T> Item<T> {
    pub fn new() -> Self {
        Item(PhantomData)
    }
}

impl<T> Default for Item<T> {
    fn default() -> Self {
        Item::new()
    }
}

impl<T> Clone for Item<T> {
    fn clone(&self) -> Self {
        Item(PhantomData)
    }
}

/// Shorthand for `Item::new()`.
pub fn item<T>() -> Item<T> {
    Item::new()
}

impl<T: Send + 'static> PortSpec for Item<T> {
    type Value = T;
    type Tx = Sender<T>;
    type Rx = Receiver<T>;

    fn shape(&self) -> Shape {
        Shape::Item
    }

    fn open_with(&self, net: &mut Network, name: &str, cap: Capacity) -> (Self::Tx, Self::Rx) {
        net.channel_with(name, cap)
    }

    fn produce(&self, p: &mut Proc, tx: &Self::Tx, value: T) {
        p.send(tx, value);
    }

    fn store(&self, p: &mut Proc, rx: &Self::Rx) -> T {
        p.recv(rx)
    }

    fn probes(&self, rx: &Self::Rx, out: &mut Vec<ChanId>) {
        out.push(rx.id());
    }

    fn leaves(&self, rx: &Self::Rx, out: &mut Vec<ChanId>) {
        out.push(rx.id());
    }
}

pub struct StreamTx<Tx> {
    pub elems: Tx,
    pub eot: Sender<bool>,
}

pub struct StreamRx<Rx> {
    pub elems: Rx,
    pub eot: Receiver<bool>,
}

/// A sequence of inner transfers terminated by one EOT message on a
/// dedicated channel.
#[derive(Clone)]
pub struct StreamOf<S>(pub S);

impl<S: PortSpec> StreamOf<S> {
    pub fn new(inner: S) -> Self {
        StreamOf(inner)
    }

    /// Receive the next element, or `None` once EOT arrives. Elements take
    /// priority over a pending EOT so that buffered channels drain in order;
    /// the producer is obliged to send EOT last.
    pub fn next(&self, p: &mut Proc, rx: &StreamRx<S::Rx>) -> Option<S::Value> {
        let mut watch = Vec::new();
        self.0.probes(&rx.elems, &mut watch);
        watch.push(rx.eot.id());
        let chosen = p.select(&watch);
        if chosen == rx.eot.id() {
            let _ = p.recv(&rx.eot);
            None
        } else {
            Some(self.0.store(p, &rx.elems))
        }
    }

    pub fn send_elem(&self, p: &mut Proc, tx: &StreamTx<S::Tx>, value: S::Value) {
        self.0.produce(p, &tx.elems, value);
    }

    pub fn send_eot(&self, p: &mut Proc, tx: &StreamTx<S::Tx>) {
        p.send(&tx.eot, true);
    }
}

impl<S: PortSpec> PortSpec for StreamOf<S> {
    type Value = Vec<S::Value>;
    type Tx = StreamTx<S::Tx>;
    type Rx = StreamRx<S::Rx>;

    fn shape(&self) -> Shape {
        Shape::stream(self.0.shape())
    }

    fn open_with(&self, net: &mut Network, name: &str, cap: Capacity) -> (Self::Tx, Self::Rx) {
        let (etx, erx) = self.0.open_with(net, &format!("{name}.elems"), cap);
        let (eot_tx, eot_rx) = net.channel_with::<bool>(&format!("{name}.eot"), cap);
        let mut leaves = Vec::new();
        self.0.leaves(&erx, &mut leaves);
        net.register_stream(&leaves, eot_rx.id());
        (
            StreamTx {
                elems: etx,
                eot: eot_tx,
            },
            StreamRx {
                elems: erx,
                eot: eot_rx,
            },
        )
    }

    fn produce(&self, p: &mut Proc, tx: &Self::Tx, value: Self::Value) {
        for v in value {
            self.send_elem(p, tx, v);
        }
        self.send_eot(p, tx);
    }

    fn store(&self, p: &mut Proc, rx: &Self::Rx) -> Self::Value {
        let mut out = Vec::new();
        while let Some(v) = self.next(p, rx) {
            out.push(v);
        }
        out
    }

    fn check_value(&self, value: &Self::Value) -> Result<(), Shape> {
        value.iter().try_for_each(|v| self.0.check_value(v))
    }

    fn probes(&self, rx: &Self::Rx, out: &mut Vec<ChanId>) {
        // As an element of an outer structure, a stream announces itself by
        // either its first element or an immediate EOT.
        self.0.probes(&rx.elems, out);
        out.push(rx.eot.id());
    }

    fn leaves(&self, rx: &Self::Rx, out: &mut Vec<ChanId>) {
        self.0.leaves(&rx.elems, out);
        out.push(rx.eot.id());
    }
}

/// `n` copies of the inner bundle; each lane communicates once per transfer
/// and distinct lanes may do so concurrently.
#[derive(Clone)]
pub struct VectorOf<S>(pub usize, pub S);

impl<S> VectorOf<S> {
    pub fn new(n: usize, inner: S) -> Self {
        VectorOf(n, inner)
    }

    pub fn len(&self) -> usize {
        self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }
}

impl<S: PortSpec> PortSpec for VectorOf<S> {
    type Value = Vec<S::Value>;
    type Tx = Vec<S::Tx>;
    type Rx = Vec<S::Rx>;

    fn shape(&self) -> Shape {
        Shape::vector(self.0, self.1.shape())
    }

    fn open_with(&self, net: &mut Network, name: &str, cap: Capacity) -> (Self::Tx, Self::Rx) {
        assert!(self.0 > 0, "vector port must have positive length");
        let mut txs = Vec::with_capacity(self.0);
        let mut rxs = Vec::with_capacity(self.0);
        for i in 0..self.0 {
            let (tx, rx) = self.1.open_with(net, &format!("{name}[{i}]"), cap);
            txs.push(tx);
            rxs.push(rx);
        }
        (txs, rxs)
    }

    fn produce(&self, p: &mut Proc, tx: &Self::Tx, value: Self::Value) {
        assert_eq!(
            value.len(),
            self.0,
            "vector transfer length mismatch on a {}-lane port",
            self.0
        );
        for (lane, v) in tx.iter().zip(value) {
            self.1.produce(p, lane, v);
        }
    }

    fn check_value(&self, value: &Self::Value) -> Result<(), Shape> {
        if value.len() != self.0 {
            return Err(self.shape());
        }
        value.iter().try_for_each(|v| self.1.check_value(v))
    }

    fn store(&self, p: &mut Proc, rx: &Self::Rx) -> Self::Value {
        rx.iter().map(|lane| self.1.store(p, lane)).collect()
    }

    fn probes(&self, rx: &Self::Rx, out: &mut Vec<ChanId>) {
        if let Some(first) = rx.first() {
            self.1.probes(first, out);
        }
    }

    fn leaves(&self, rx: &Self::Rx, out: &mut Vec<ChanId>) {
        for lane in rx {
            self.1.leaves(lane, out);
        }
    }
}

/// Two unrelated bundles handled by one process (e.g. the two inputs of a
/// zip). Produced left-to-right.
#[derive(Clone)]
pub struct PairOf<A, B>(pub A, pub B);

impl<A: PortSpec, B: PortSpec> PortSpec for PairOf<A, B> {
    type Value = (A::Value, B::Value);
    type Tx = (A::Tx, B::Tx);
    type Rx = (A::Rx, B::Rx);

    fn shape(&self) -> Shape {
        Shape::Pair(Box::new(self.0.shape()), Box::new(self.1.shape()))
    }

    fn open_with(&self, net: &mut Network, name: &str, cap: Capacity) -> (Self::Tx, Self::Rx) {
        let (atx, arx) = self.0.open_with(net, &format!("{name}.a"), cap);
        let (btx, brx) = self.1.open_with(net, &format!("{name}.b"), cap);
        ((atx, btx), (arx, brx))
    }

    fn produce(&self, p: &mut Proc, tx: &Self::Tx, value: Self::Value) {
        self.0.produce(p, &tx.0, value.0);
        self.1.produce(p, &tx.1, value.1);
    }

    fn store(&self, p: &mut Proc, rx: &Self::Rx) -> Self::Value {
        let a = self.0.store(p, &rx.0);
        let b = self.1.store(p, &rx.1);
        (a, b)
    }

    fn check_value(&self, value: &Self::Value) -> Result<(), Shape> {
        self.0.check_value(&value.0)?;
        self.1.check_value(&value.1)
    }

    fn probes(&self, rx: &Self::Rx, out: &mut Vec<ChanId>) {
        self.0.probes(&rx.0, out);
    }

    fn leaves(&self, rx: &Self::Rx, out: &mut Vec<ChanId>) {
        self.0.leaves(&rx.0, out);
        self.1.leaves(&rx.1, out);
    }
}

/// The empty bundle, used by sources and sinks.
#[derive(Clone, Copy, Default)]
pub struct Nil;

impl PortSpec for Nil {
    type Value = ();
    type Tx = ();
    type Rx = ();

    fn shape(&self) -> Shape {
        Shape::Nil
    }

    fn open_with(&self, _net: &mut Network, _name: &str, _cap: Capacity) -> ((), ()) {
        ((), ())
    }

    fn produce(&self, _p: &mut Proc, _tx: &(), _value: ()) {}

    fn store(&self, _p: &mut Proc, _rx: &()) {}

    fn probes(&self, _rx: &(), _out: &mut Vec<ChanId>) {}

    fn leaves(&self, _rx: &(), _out: &mut Vec<ChanId>) {}
}
