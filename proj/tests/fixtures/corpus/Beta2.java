package fixture.storage;

public class Beta2 {
  public void removeVolume(VolumeService service, String volumeName) {
    VolumeState state = service.lookup(volumeName);
    state.detach();
    service.release(volumeName);
    service.confirm(volumeName);
    service.audit(volumeName);
    LOG.info("elastistor volume successfully deleted");
  }
}
