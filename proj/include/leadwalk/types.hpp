#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace leadwalk {

template <class Scalar>
using VecX = Eigen::Vector<Scalar, Eigen::Dynamic>;
template <class Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Planar path, one sample per row, columns (x, y).
template <class Scalar>
using PathT = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

using VecXd = VecX<double>;
using MatXd = MatX<double>;
using Path = PathT<double>;
using Vec2d = Eigen::Vector2d;
using BoolArray = Eigen::Array<bool, Eigen::Dynamic, 1>;
using BoolGrid = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

using AgentId = std::string;

// Slot in the square starting formation.
enum class FormationSlot { FL, FR, BL, BR };

enum class Condition { heading, speed, control };

// Which channel a correlation analysis runs on.
enum class Mode { heading, speed };

const char* to_string(FormationSlot slot);
const char* to_string(Condition condition);
const char* to_string(Mode mode);
std::optional<FormationSlot> formation_slot_from_string(const std::string& s);
std::optional<Condition> condition_from_string(const std::string& s);
std::optional<Mode> mode_from_string(const std::string& s);

class Error : public std::runtime_error {
 public:
  enum class Kind {
    parse,
    structure,
    timing,
    range,
    filter_design,
    length,
    empty_map,
    undefined_score,
    config,
    io,
  };

  Error(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace leadwalk
