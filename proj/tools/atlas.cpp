//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
int main() { return 0; }
