//! Destinations for simulation snapshots.

use crate::error::Result;
use crate::macrosim::MacroState;
use crate::microsim::ParticleEnsemble;

#[derive(Debug, Clone, Copy)]
pub enum SnapshotRef<'a, T> {
    Micro(&'a ParticleEnsemble<T>),
    Macro(&'a MacroState<T>),
}

pub trait SnapshotSink<T> {
    fn write(&mut self, t: T, snapshot: SnapshotRef<'_, T>) -> Result<()>;
}

/// Discards every snapshot.
#[derive(Debug, Default, Clone, Copy)]
pub struct NullSink;

impl<T> SnapshotSink<T> for NullSink {
    fn write(&mut self, _t: T, _snapshot: SnapshotRef<'_, T>) -> Result<()> {
        Ok(())
    }
}

/// Keeps copies in memory.
#[derive(Debug, Clone)]
pub enum Owned<T> {
    Micro(ParticleEnsemble<T>),
    Macro(MacroState<T>),
}

#[derive(Debug, Clone)]
pub struct MemorySink<T> {
    pub snapshots: Vec<(T, Owned<T>)>,
}

impl<T> Default for MemorySink<T> {
    fn default() -> Self {
        Self { snapshots: Vec::new() }
    }
}

impl<T: Clone> SnapshotSink<T> for MemorySink<T> {
    fn write(&mut self, t: T, snapshot: SnapshotRef<'_, T>) -> Result<()> {
        let owned = match snapshot {
            SnapshotRef::Micro(e) => Owned::Micro(e.clone()),
            SnapshotRef::Macro(s) => Owned::Macro(s.clone()),
        };
        self.snapshots.push((t, owned));
        Ok(())
    }
}
