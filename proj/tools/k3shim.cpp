// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>

int main() {
    std::puts("k3shim: placeholder");
    return 0;
}
