// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(stagger_dd::cli::main_with_args(std::env::args_os()));
}
