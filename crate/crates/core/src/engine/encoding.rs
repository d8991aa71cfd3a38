use std::fmt::Debug;

/// Bits reserved at the top of an edge entry for the owning partition.
pub const TAG_BITS: u32 = 4;
/// Most partitions a plan may have.
pub const MAX_PARTITIONS: usize = 1 << TAG_BITS;
/// Bits left for a local vertex id or an outbox slot index.
pub const PAYLOAD_BITS: u32 = 32 - TAG_BITS;
pub const PAYLOAD_MASK: u32 = (1 << PAYLOAD_BITS) - 1;

/// Edge entry of a partition: the owner's partition index in the high bits
/// and either a local vertex id (owner is this partition) or the index of the
/// outbox slot that stands in for the remote vertex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
#[repr(transparent)]
pub struct EncodedTarget(u32);

impl EncodedTarget {
    #[inline]
    pub fn new(tag: usize, payload: u32) -> Self {
        debug_assert!(tag < MAX_PARTITIONS);
        debug_assert!(payload <= PAYLOAD_MASK);
        EncodedTarget(((tag as u32) << PAYLOAD_BITS) | payload)
    }

    #[inline]
    pub fn tag(self) -> usize {
        (self.0 >> PAYLOAD_BITS) as usize
    }

    #[inline]
    pub fn payload(self) -> u32 {
        self.0 & PAYLOAD_MASK
    }

    #[inline]
    pub fn raw(self) -> u32 {
        self.0
    }
}

/// A message value that fits in a 64-bit atomic slot.
///
/// `WIRE_BYTES` is what one slot costs on the interconnect.
pub trait Payload: Copy + Send + Sync + PartialEq + Debug + 'static {
    const WIRE_BYTES: usize;
    fn to_bits(self) -> u64;
    fn from_bits(bits: u64) -> Self;
}

impl Payload for u32 {
    const WIRE_BYTES: usize = 4;
    #[inline]
    fn to_bits(self) -> u64 {
        self as u64
    }
    #[inline]
    fn from_bits(bits: u64) -> Self {
        bits as u32
    }
}

impl Payload for u64 {
    const WIRE_BYTES: usize = 8;
    #[inline]
    fn to_bits(self) -> u64 {
        self
    }
    #[inline]
    fn from_bits(bits: u64) -> Self {
        bits
    }
}

impl Payload for f32 {
    const WIRE_BYTES: usize = 4;
    #[inline]
    fn to_bits(self) -> u64 {
        f32::to_bits(self) as u64
    }
    #[inline]
    fn from_bits(bits: u64) -> Self {
        f32::from_bits(bits as u32)
    }
}

impl Payload for f64 {
    const WIRE_BYTES: usize = 8;
    #[inline]
    fn to_bits(self) -> u64 {
        f64::to_bits(self)
    }
    #[inline]
    fn from_bits(bits: u64) -> Self {
        f64::from_bits(bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tag_and_payload_round_trip() {
        for tag in [0, 1, 7, MAX_PARTITIONS - 1] {
            for payload in [0, 1, 12345, PAYLOAD_MASK] {
                let e = EncodedTarget::new(tag, payload);
                assert_eq!((e.tag(), e.payload()), (tag, payload));
            }
        }
    }

    #[test]
    fn payload_bits_round_trip() {
        assert_eq!(u32::from_bits(u32::MAX.to_bits()), u32::MAX);
        assert_eq!(f64::from_bits(Payload::to_bits(-0.125f64)), -0.125);
        assert_eq!(<f32 as Payload>::from_bits(Payload::to_bits(3.5f32)), 3.5);
    }
}
