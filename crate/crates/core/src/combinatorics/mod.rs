//! Integer partitions and set-partitions.

mod partition;
mod set_partition;

pub use partition::{partitions_of, partitions_up_to, partitions_with_rows, Partition};
pub use set_partition::{noncrossing_partitions, set_partitions, set_partitions_of, SetPartition};
