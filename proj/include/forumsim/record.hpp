#pragma once

#include <cstdint>
#include <tuple>

#include "forumsim/model.hpp"

namespace forumsim {

// Flattened event-log row shared by simulator output and ingested logs.
// Simulated threads number comments from 1 (post 0 is the source and is
// not logged); ingested logs may start at 0 when no source row exists.
struct ForumRecord {
    std::int64_t thread_id = 0;
    std::int32_t post_index = 0;
    std::int64_t author_id = 0;
    Valence valence = Valence::neutral;

    friend bool operator==(const ForumRecord&, const ForumRecord&) = default;
};

inline bool record_key_less(const ForumRecord& a, const ForumRecord& b) {
    return std::tie(a.thread_id, a.post_index) < std::tie(b.thread_id, b.post_index);
}

}  // namespace forumsim
