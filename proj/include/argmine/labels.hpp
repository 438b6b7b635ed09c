#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace argmine {

enum class ComponentType : std::uint8_t {
  kClaim,
  kPremise,
  kBacking,
  kRebuttal,
  kRefutation,
  kAppealToEmotion,
};

enum class Dimension : std::uint8_t { kLogos, kPathos };

enum class Topic : std::uint8_t {
  kHomeschooling,
  kMainstreaming,
  kPrayerInSchools,
  kPublicPrivateSchools,
  kRedshirting,
  kSingleSexEducation,
};

enum class Register : std::uint8_t { kComment, kForumPost, kBlogPost, kArticle };

inline constexpr std::array<ComponentType, 5> kLogosTypes = {
    ComponentType::kClaim, ComponentType::kPremise, ComponentType::kBacking,
    ComponentType::kRebuttal, ComponentType::kRefutation};

inline constexpr std::array<Topic, 6> kAllTopics = {
    Topic::kHomeschooling,   Topic::kMainstreaming,        Topic::kPrayerInSchools,
    Topic::kPublicPrivateSchools, Topic::kRedshirting, Topic::kSingleSexEducation};

inline constexpr std::array<Register, 4> kAllRegisters = {
    Register::kComment, Register::kForumPost, Register::kBlogPost, Register::kArticle};

// The dimension a component type belongs to.
constexpr Dimension dimension_of(ComponentType t) {
  return t == ComponentType::kAppealToEmotion ? Dimension::kPathos : Dimension::kLogos;
}

std::string_view to_string(ComponentType t);
std::string_view to_string(Dimension d);
std::string_view to_string(Topic t);
std::string_view to_string(Register r);

std::optional<ComponentType> parse_component_type(std::string_view s);
std::optional<Dimension> parse_dimension(std::string_view s);
std::optional<Topic> parse_topic(std::string_view s);
std::optional<Register> parse_register(std::string_view s);

// 11-class BIO label over the five logos component types. The enumeration
// order is the tie-break order used by the decoder (O first).
enum class BioLabel : std::uint8_t {
  kO,
  kClaimB,
  kClaimI,
  kPremiseB,
  kPremiseI,
  kBackingB,
  kBackingI,
  kRebuttalB,
  kRebuttalI,
  kRefutationB,
  kRefutationI,
};

inline constexpr std::size_t kNumBioLabels = 11;

constexpr std::size_t index_of(BioLabel l) { return static_cast<std::size_t>(l); }
constexpr BioLabel bio_from_index(std::size_t i) { return static_cast<BioLabel>(i); }

std::string_view to_string(BioLabel l);
std::optional<BioLabel> parse_bio_label(std::string_view s);

constexpr bool is_begin(BioLabel l) {
  return l != BioLabel::kO && (static_cast<int>(l) % 2) == 1;
}
constexpr bool is_inside(BioLabel l) {
  return l != BioLabel::kO && (static_cast<int>(l) % 2) == 0;
}

// Component type of a non-O label.
std::optional<ComponentType> component_of(BioLabel l);
BioLabel begin_label(ComponentType t);
BioLabel inside_label(ComponentType t);

}  // namespace argmine
