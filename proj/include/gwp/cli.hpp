#pragma once

namespace gwp {

int cli_main(int argc, char** argv);

}  // namespace gwp
