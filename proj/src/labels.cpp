#include "argmine/labels.hpp"

namespace argmine {
namespace {

constexpr std::array<std::string_view, 6> kTypeNames = {
    "claim", "premise", "backing", "rebuttal", "refutation", "appeal_to_emotion"};
constexpr std::array<std::string_view, 2> kDimensionNames = {"logos", "pathos"};
constexpr std::array<std::string_view, 6> kTopicNames = {
    "homeschooling", "mainstreaming",        "prayer-in-schools",
    "public-private-schools", "redshirting", "single-sex-education"};
constexpr std::array<std::string_view, 4> kRegisterNames = {"comment", "forumpost",
                                                            "blogpost", "article"};
constexpr std::array<std::string_view, kNumBioLabels> kBioNames = {
    "O",          "Claim-B",    "Claim-I",      "Premise-B",   "Premise-I",   "Backing-B",
    "Backing-I",  "Rebuttal-B", "Rebuttal-I",   "Refutation-B", "Refutation-I"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ComponentType t) { return kTypeNames[static_cast<std::size_t>(t)]; }
std::string_view to_string(Dimension d) { return kDimensionNames[static_cast<std::size_t>(d)]; }
std::string_view to_string(Topic t) { return kTopicNames[static_cast<std::size_t>(t)]; }
std::string_view to_string(Register r) { return kRegisterNames[static_cast<std::size_t>(r)]; }
std::string_view to_string(BioLabel l) { return kBioNames[index_of(l)]; }

std::optional<ComponentType> parse_component_type(std::string_view s) {
  return lookup<ComponentType>(kTypeNames, s);
}
std::optional<Dimension> parse_dimension(std::string_view s) {
  return lookup<Dimension>(kDimensionNames, s);
}
std::optional<Topic> parse_topic(std::string_view s) { return lookup<Topic>(kTopicNames, s); }
std::optional<Register> parse_register(std::string_view s) {
  return lookup<Register>(kRegisterNames, s);
}
std::optional<BioLabel> parse_bio_label(std::string_view s) {
  return lookup<BioLabel>(kBioNames, s);
}

std::optional<ComponentType> component_of(BioLabel l) {
  if (l == BioLabel::kO) return std::nullopt;
  return static_cast<ComponentType>((index_of(l) - 1) / 2);
}

BioLabel begin_label(ComponentType t) {
  return bio_from_index(1 + 2 * static_cast<std::size_t>(t));
}

BioLabel inside_label(ComponentType t) {
  return bio_from_index(2 + 2 * static_cast<std::size_t>(t));
}

}  // namespace argmine
