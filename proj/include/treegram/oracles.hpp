#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "treegram/label.hpp"
#include "treegram/tree.hpp"

// Decompressed-side reference algorithms. Everything here works on explicit
// trees and is used to check the compressed algorithms.

namespace treegram {

/// canon(t): children replaced bottom-up by their canons in llex order.
/// Meaningful for ranked trees.
Tree ahu_canon(const Tree& t, const LabelOrder& ord = {});

/// AHU-style isomorphism key that works for arbitrary labels (ranked or not).
/// Equal keys iff the unordered rooted trees are isomorphic.
std::string iso_key(const Tree& t);

/// Rooted unordered isomorphism by backtracking over child matchings.
bool brute_force_iso(const Tree& s, const Tree& t);

/// Unrooted unordered isomorphism: some re-rooting of t matches s rooted at its root.
bool brute_force_unrooted_iso(const Tree& s, const Tree& t);

/// Subdivides every edge by a node labelled kSubdivisionLabel.
Tree naive_even(const Tree& t);

/// Center of the unrooted tree by iterated leaf removal. Requires even diameter.
DeweyAddress naive_center(const Tree& t);

/// The tree re-rooted at `u`: u's own children first, then its former parent,
/// whose child list keeps the former child slot for the next ancestor.
Tree naive_reroot(const Tree& t, const DeweyAddress& u);

/// Bottom-up removal of bisimilar siblings; survivors sorted by llex.
Tree naive_bcanon(const Tree& t, const LabelOrder& ord = {});

/// Largest bisimulation on the disjoint union, by partition refinement.
bool naive_bisim(const Tree& s, const Tree& t);

// Explicit distance measures on the unrooted version of a tree.
std::size_t explicit_diameter(const Tree& t);
std::size_t explicit_eccentricity(const Tree& t, const DeweyAddress& u);

/// Addresses of all nodes in dflr order.
std::vector<DeweyAddress> all_addresses(const Tree& t);

/// Address of the first node (dflr order) carrying `label`; throws if none.
DeweyAddress find_label(const Tree& t, const std::string& label);

}  // namespace treegram
