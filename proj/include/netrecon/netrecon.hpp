#pragma once

#include <netrecon/errors.hpp>
#include <netrecon/model.hpp>
#include <netrecon/trajectory_io.hpp>
#include <netrecon/group_element.hpp>
#include <netrecon/gram.hpp>
#include <netrecon/group.hpp>
#include <netrecon/lp.hpp>
#include <netrecon/property.hpp>
#include <netrecon/geometry.hpp>
#include <netrecon/reconstruct.hpp>
#include <netrecon/perturb.hpp>
#include <netrecon/report.hpp>
