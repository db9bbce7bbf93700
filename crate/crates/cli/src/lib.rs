// SPDX-License-Identifier: Apache-2.0

//! Library side of the `netkit` command-line tool.

pub mod profile;
pub mod render;
