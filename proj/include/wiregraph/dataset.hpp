#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

namespace wiregraph {

struct SplitSpec {
    std::set<int> train;
    std::set<int> validation;
    std::set<int> test;
};

/// Drafters 1-20 and 25 train, 21-22 validate, 23-24 test.
SplitSpec default_split();

bool pairwise_disjoint(const SplitSpec& split);

enum class SplitName { Train, Validation, Test, All };

std::optional<SplitName> parse_split_name(std::string_view s);

/// Drafters selected by `name`; All is the union of the three sets.
std::set<int> drafters_of(const SplitSpec& split, SplitName name);

/// Finds "drafter_<n>" (or "drafter<n>", "drafter-<n>") in any path component.
std::optional<int> drafter_from_path(const std::filesystem::path& path);

struct DatasetEntry {
    std::filesystem::path annotation;
    std::optional<std::filesystem::path> image;
    std::optional<std::filesystem::path> segmap;
    int drafter = 0;
};

/// Scans a CGHD-layout tree (<root>/drafter_<n>/annotations/*.xml with sibling
/// images/ and segmentation/ folders) and keeps the selected drafters.
/// Entries come back sorted by annotation path.
std::vector<DatasetEntry> scan_dataset(const std::filesystem::path& root, const std::set<int>& drafters);

}  // namespace wiregraph
