public class UserPreferences {

    public UserPreferences() {
    }
}
