#pragma once

#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace gazekit {

/// Ordered set of non-background class names. Id 0 is reserved for
/// background; class ids are 1-based and stable for the life of a corpus.
class ClassTaxonomy {
public:
    static constexpr int kBackgroundId = 0;

    ClassTaxonomy() = default;
    explicit ClassTaxonomy(std::vector<std::string> names) : names_(std::move(names)) {
        std::unordered_set<std::string> seen;
        for (const auto& n : names_) {
            if (n.empty() || n == "background")
                throw std::invalid_argument("taxonomy: invalid class name");
            if (!seen.insert(n).second)
                throw std::invalid_argument("taxonomy: duplicate class name '" + n + "'");
        }
    }

    int num_classes() const { return static_cast<int>(names_.size()); }

    // ids run 1..K; 0 is background
    const std::string& name(int id) const {
        static const std::string bg = "background";
        if (id == kBackgroundId) return bg;
        if (id < 1 || id > num_classes())
            throw std::out_of_range("taxonomy: class id out of range");
        return names_[static_cast<size_t>(id) - 1];
    }

    int id_of(const std::string& name) const {
        if (name == "background") return kBackgroundId;
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i) + 1;
        throw std::invalid_argument("taxonomy: unknown class '" + name + "'");
    }

    const std::vector<std::string>& names() const { return names_; }

    bool operator==(const ClassTaxonomy& o) const { return names_ == o.names_; }

private:
    std::vector<std::string> names_;
};

/// The 15-class outdoor-walk taxonomy used throughout the toolkit defaults.
inline ClassTaxonomy default_taxonomy() {
    return ClassTaxonomy({
        "bench/chair", "bicycle", "building", "bus", "car", "construction",
        "pavement", "person", "plant horizontal", "plant vertical", "pole",
        "scooter", "sculpture", "sign", "sky",
    });
}

} // namespace gazekit
