#include "wiregraph/dataset.hpp"

#include <algorithm>
#include <regex>

namespace wiregraph {

SplitSpec default_split()
{
    SplitSpec s;
    for (int d = 1; d <= 20; ++d)
        s.train.insert(d);
    s.train.insert(25);
    s.validation = {21, 22};
    s.test = {23, 24};
    return s;
}

bool pairwise_disjoint(const SplitSpec& split)
{
    auto disjoint = [](const std::set<int>& a, const std::set<int>& b) {
        return std::none_of(a.begin(), a.end(), [&](int v) { return b.count(v) != 0; });
    };
    return disjoint(split.train, split.validation) && disjoint(split.train, split.test) &&
           disjoint(split.validation, split.test);
}

std::optional<SplitName> parse_split_name(std::string_view s)
{
    if (s == "train")
        return SplitName::Train;
    if (s == "validation" || s == "val")
        return SplitName::Validation;
    if (s == "test")
        return SplitName::Test;
    if (s == "all")
        return SplitName::All;
    return std::nullopt;
}

std::set<int> drafters_of(const SplitSpec& split, SplitName name)
{
    switch (name) {
    case SplitName::Train: return split.train;
    case SplitName::Validation: return split.validation;
    case SplitName::Test: return split.test;
    case SplitName::All: break;
    }
    std::set<int> all = split.train;
    all.insert(split.validation.begin(), split.validation.end());
    all.insert(split.test.begin(), split.test.end());
    return all;
}

std::optional<int> drafter_from_path(const std::filesystem::path& path)
{
    static const std::regex pattern(R"(^drafter[_-]?(\d+)$)", std::regex::icase);
    std::optional<int> found;
    for (const auto& part : path) {
        std::smatch m;
        const std::string s = part.string();
        if (std::regex_match(s, m, pattern))
            found = std::stoi(m[1].str());
    }
    return found;
}

namespace {

std::optional<std::filesystem::path> find_sibling(const std::filesystem::path& dir, const std::string& stem,
                                                  std::initializer_list<const char*> exts)
{
    if (!std::filesystem::is_directory(dir))
        return std::nullopt;
    for (const char* ext : exts) {
        auto candidate = dir / (stem + ext);
        if (std::filesystem::exists(candidate))
            return candidate;
    }
    return std::nullopt;
}

}  // namespace

std::vector<DatasetEntry> scan_dataset(const std::filesystem::path& root, const std::set<int>& drafters)
{
    namespace fs = std::filesystem;
    std::vector<DatasetEntry> entries;
    if (!fs::is_directory(root))
        return entries;
    for (const auto& dir : fs::directory_iterator(root)) {
        if (!dir.is_directory())
            continue;
        auto drafter = drafter_from_path(dir.path().filename());
        if (!drafter || drafters.count(*drafter) == 0)
            continue;
        const fs::path ann_dir = dir.path() / "annotations";
        if (!fs::is_directory(ann_dir))
            continue;
        for (const auto& f : fs::directory_iterator(ann_dir)) {
            if (!f.is_regular_file() || f.path().extension() != ".xml")
                continue;
            DatasetEntry e;
            e.annotation = f.path();
            e.drafter = *drafter;
            const std::string stem = f.path().stem().string();
            e.image = find_sibling(dir.path() / "images", stem, {".jpg", ".jpeg", ".png", ".JPG", ".JPEG", ".PNG"});
            e.segmap = find_sibling(dir.path() / "segmentation", stem, {".png", ".jpg", ".PNG", ".JPG"});
            entries.push_back(std::move(e));
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const DatasetEntry& a, const DatasetEntry& b) { return a.annotation < b.annotation; });
    return entries;
}

}  // namespace wiregraph
