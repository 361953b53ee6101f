#include "ragcritic/trajectory.hpp"

#include <regex>

#include "ragcritic/text.hpp"

namespace ragcritic {

namespace {

struct TagMatch {
    StepKind kind;
    size_t open_begin;
    size_t content_begin;
};

std::optional<TagMatch> next_open_tag(std::string_view raw, size_t from) {
    std::optional<TagMatch> best;
    for (StepKind kind : kAllStepKinds) {
        const std::string open = "<" + std::string(step_kind_name(kind)) + ">";
        size_t pos = raw.find(open, from);
        if (pos == std::string_view::npos) continue;
        if (!best || pos < best->open_begin) {
            best = TagMatch{kind, pos, pos + open.size()};
        }
    }
    return best;
}

// "Doc 3:" / "Document 3:" markers, case-insensitive, flexible whitespace.
const std::regex& doc_marker_regex() {
    static const std::regex re(R"((Doc|Document)\s*(\d+)\s*:)", std::regex::icase);
    return re;
}

std::vector<DocumentRef> split_documents(const std::string& content) {
    struct Marker {
        bool long_form;
        int index;
        size_t begin;
        size_t end;
    };
    std::vector<Marker> markers;
    auto begin_it = std::sregex_iterator(content.begin(), content.end(), doc_marker_regex());
    for (auto it = begin_it; it != std::sregex_iterator(); ++it) {
        const std::smatch& m = *it;
        Marker marker;
        marker.long_form = m[1].length() > 3;
        marker.index = std::stoi(m[2].str());
        marker.begin = static_cast<size_t>(m.position(0));
        marker.end = marker.begin + static_cast<size_t>(m.length(0));
        markers.push_back(marker);
    }
    if (markers.empty()) return {};

    // When both spellings appear, the form of the first marker wins and the
    // other spelling is left as plain document text.
    const bool long_form = markers.front().long_form;
    std::erase_if(markers, [&](const Marker& m) { return m.long_form != long_form; });

    std::vector<DocumentRef> docs;
    for (size_t i = 0; i < markers.size(); ++i) {
        const size_t text_begin = markers[i].end;
        const size_t text_end =
            (i + 1 < markers.size()) ? markers[i + 1].begin : content.size();
        DocumentRef doc;
        doc.index = markers[i].index;
        doc.text = std::string(trim(std::string_view(content).substr(
            text_begin, text_end - text_begin)));
        docs.push_back(std::move(doc));
    }
    return docs;
}

}  // namespace

bool Trajectory::has_step(StepKind kind) const {
    for (const TrajectoryStep& step : steps) {
        if (step.kind == kind) return true;
    }
    return false;
}

int Trajectory::count_steps(StepKind kind) const {
    int count = 0;
    for (const TrajectoryStep& step : steps) {
        if (step.kind == kind) ++count;
    }
    return count;
}

bool Trajectory::has_document(int index) const {
    return document_text(index).has_value();
}

std::optional<std::string> Trajectory::document_text(int index) const {
    for (const TrajectoryStep& step : steps) {
        if (step.kind != StepKind::information) continue;
        for (const DocumentRef& doc : step.documents) {
            if (doc.index == index) return doc.text;
        }
    }
    return std::nullopt;
}

std::string Trajectory::joined_text() const {
    std::string out;
    for (const TrajectoryStep& step : steps) {
        if (!out.empty()) out.push_back('\n');
        out += step.content;
    }
    return out;
}

Trajectory parse_trajectory(std::string_view raw) {
    Trajectory traj;
    size_t pos = 0;
    while (true) {
        auto open = next_open_tag(raw, pos);
        if (!open) break;
        const std::string close = "</" + std::string(step_kind_name(open->kind)) + ">";
        size_t close_pos = raw.find(close, open->content_begin);
        if (close_pos == std::string_view::npos) {
            // Unclosed tag: drop it and keep scanning inside what would have
            // been its content.
            pos = open->content_begin;
            continue;
        }
        TrajectoryStep step;
        step.kind = open->kind;
        step.content = std::string(
            trim(raw.substr(open->content_begin, close_pos - open->content_begin)));
        if (step.kind == StepKind::information) {
            step.documents = split_documents(step.content);
        }
        traj.steps.push_back(std::move(step));
        pos = close_pos + close.size();
    }
    for (const TrajectoryStep& step : traj.steps) {
        if (step.kind == StepKind::answer) traj.final_answer = step.content;
    }
    return traj;
}

std::string serialize_trajectory(const Trajectory& traj) {
    std::string out;
    for (const TrajectoryStep& step : traj.steps) {
        const std::string_view name = step_kind_name(step.kind);
        out += "<" + std::string(name) + ">" + step.content + "</" + std::string(name) + ">";
    }
    return out;
}

bool locate_component(const Trajectory& traj, const ErrorLocation& loc) {
    if (!traj.has_step(loc.loc_type)) return false;
    if (!loc.index) return true;
    if (loc.loc_type == StepKind::information) return traj.has_document(*loc.index);
    if (loc.loc_type == StepKind::think) return traj.count_steps(StepKind::think) >= *loc.index;
    return false;
}

}  // namespace ragcritic
