#pragma once

#include "belltel/quantum.hpp"
#include "belltel/device.hpp"
#include "belltel/protocol.hpp"
#include "belltel/nosignal.hpp"
#include "belltel/relativity.hpp"
#include "belltel/config.hpp"
#include "belltel/report.hpp"
#include "belltel/cli.hpp"
